"""Evaluation/interpolation GCD for multivariate polynomials over GF(2).

Pseudo-remainder sequences blow up on inputs of even moderate degree, so
the general GCD here is Brown's modular algorithm: lift the coefficients
to E = GF(2^16), evaluate variables one at a time at points of E,
compute univariate GCDs at the bottom, and reconstruct the dependence on
each evaluated variable by Newton interpolation. Images are normalized
through gamma = gcd of the two leading coefficients, so the interpolation
target is the GF(2)-polynomial H = (gamma / lc(G)) * G; unlucky
evaluation points show up as images of too-large degree in the main
variable and are discarded. The final candidate is content-stripped and
certified by exact trial division, with a deterministic restart sequence
(and the slow PRS as a last-resort fallback), so the returned value is
always the true GCD.

E is realized with log/antilog tables over a primitive degree-16
modulus, found once at first use.
"""

from .errors import InternalCheckError

_ORDER = 1 << 16
_PERIOD = _ORDER - 1

_EXP = None
_LOG = None


def _carryless_mod_mul(a, b, modulus):
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        if a & _ORDER:
            a ^= modulus
        b >>= 1
    return acc


def _init_tables():
    """Find a primitive degree-16 modulus and build exp/log tables."""
    global _EXP, _LOG
    if _EXP is not None:
        return
    for low in range(3, _ORDER, 2):
        modulus = _ORDER | low
        exp = [0] * (2 * _PERIOD)
        val = 1
        ok = True
        for i in range(_PERIOD):
            exp[i] = val
            val = _carryless_mod_mul(val, 2, modulus)
            if val == 1 and i != _PERIOD - 1:
                ok = False
                break
        if not ok or val != 1:
            continue
        log = [0] * _ORDER
        distinct = True
        for i in range(_PERIOD):
            if log[exp[i]] and exp[i] != 1:
                distinct = False
                break
            log[exp[i]] = i
        if not distinct:
            continue
        log[1] = 0
        for i in range(_PERIOD, 2 * _PERIOD):
            exp[i] = exp[i - _PERIOD]
        _EXP, _LOG = exp, log
        return
    raise InternalCheckError("no primitive degree-16 modulus found")


def _gf_mul(a, b):
    if not a or not b:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


def _gf_inv(a):
    return _EXP[_PERIOD - _LOG[a]] if _LOG[a] else 1


def _gf_pow(a, e):
    if e == 0:
        return 1
    if not a:
        return 0
    return _EXP[(_LOG[a] * e) % _PERIOD]


# ---------------------------------------------------------------------------
# Sparse polynomials over E: {monomial tuple: nonzero int coefficient}
# ---------------------------------------------------------------------------

def _e_add(p, q):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) ^ c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _e_scale(p, c):
    if c == 1:
        return p
    return {m: _gf_mul(v, c) for m, v in p.items()}


def _e_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            exps = dict(m1)
            for v, e in m2:
                exps[v] = exps.get(v, 0) + e
            m = tuple(sorted(exps.items()))
            c = out.get(m, 0) ^ _gf_mul(c1, c2)
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def _e_deg(p, var):
    d = 0
    for m in p:
        for v, e in m:
            if v == var and e > d:
                d = e
    return d


def _e_eval(p, var, alpha):
    """Substitute var = alpha (alpha in E)."""
    out = {}
    for m, c in p.items():
        e = 0
        rest = m
        for v, ve in m:
            if v == var:
                e = ve
                rest = tuple(x for x in m if x[0] != var)
                break
        val = _gf_mul(c, _gf_pow(alpha, e)) if e else c
        if not val:
            continue
        acc = out.get(rest, 0) ^ val
        if acc:
            out[rest] = acc
        else:
            out.pop(rest, None)
    return out


def _e_lc(p, var):
    """Leading coefficient of p with respect to var (an E-poly)."""
    d = _e_deg(p, var)
    out = {}
    for m, c in p.items():
        if any(v == var and e == d for v, e in m) or (d == 0 and all(v != var for v, _ in m)):
            rest = tuple(x for x in m if x[0] != var)
            out[rest] = c
    return out


def _e_mul_linear(p, var, alpha):
    """p * (x_var + alpha)."""
    shifted = {}
    for m, c in p.items():
        exps = dict(m)
        exps[var] = exps.get(var, 0) + 1
        shifted[tuple(sorted(exps.items()))] = c
    return _e_add(shifted, _e_scale(p, alpha))


def _e_is_const(p):
    return len(p) == 0 or (len(p) == 1 and () in p)


# ---------------------------------------------------------------------------
# Univariate GCD over E in the main variable
# ---------------------------------------------------------------------------

def _uni_from(p, var):
    coeffs = [0] * (_e_deg(p, var) + 1)
    for m, c in p.items():
        e = 0
        for v, ve in m:
            if v == var:
                e = ve
        coeffs[e] ^= c
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _uni_rem(a, b):
    lb = _gf_inv(b[-1])
    a = a[:]
    while len(a) >= len(b):
        f = _gf_mul(a[-1], lb)
        if f:
            off = len(a) - len(b)
            for i, bc in enumerate(b):
                a[off + i] ^= _gf_mul(bc, f)
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def _uni_gcd_monic(p, q, var):
    a, b = _uni_from(p, var), _uni_from(q, var)
    while b:
        a, b = b, _uni_rem(a, b)
    inv = _gf_inv(a[-1])
    out = {}
    for e, c in enumerate(a):
        if c:
            out[((var, e),) if e else ()] = _gf_mul(c, inv)
    return out


# ---------------------------------------------------------------------------
# Brown recursion
# ---------------------------------------------------------------------------

_E_ONE = {(): 1}
_STRIDE = 40507  # coprime to 2^16 - 1: deterministic point walk


def _point_sequence(salt):
    i = 1 + (salt % _PERIOD)
    while True:
        yield _EXP[i]
        i = (i + _STRIDE) % _PERIOD


def _interp_gcd(A, B, main, evars, gamma, salt):
    """Interpolation target H = gamma * monic-gcd images; returns the
    constant 1 as soon as any image shows a trivial gcd."""
    if not evars:
        g = _uni_gcd_monic(A, B, main)
        if _e_is_const(g):
            return _E_ONE
        return _e_scale(g, gamma[()])
    var = evars[-1]
    rest = evars[:-1]
    count = min(_e_deg(A, var), _e_deg(B, var)) + _e_deg(gamma, var) + 1
    lcA, lcB = _e_lc(A, main), _e_lc(B, main)
    images = []
    dmin = None
    tried = 0
    for alpha in _point_sequence(salt):
        tried += 1
        if tried > 8 * count + 64:
            return None  # ran out of good points; caller restarts
        if not _e_eval(lcA, var, alpha) or not _e_eval(lcB, var, alpha):
            continue
        h = _interp_gcd(_e_eval(A, var, alpha), _e_eval(B, var, alpha),
                        main, rest, _e_eval(gamma, var, alpha), salt + tried)
        if h is None:
            return None
        if _e_is_const(h):
            return _E_ONE
        d = _e_deg(h, main)
        if dmin is None or d < dmin:
            dmin, images = d, [(alpha, h)]
        elif d == dmin:
            images.append((alpha, h))
        if len(images) == count:
            break
    # Newton interpolation in var over the kept images
    interp = images[0][1]
    basis = _E_ONE
    for k in range(1, len(images)):
        alpha, h = images[k]
        basis = _e_mul_linear(basis, var, images[k - 1][0])
        denom = 1
        for j in range(k):
            denom = _gf_mul(denom, alpha ^ images[j][0])
        diff = _e_add(h, _e_eval(interp, var, alpha))
        if diff:
            coeff = _e_scale(diff, _gf_inv(denom))
            interp = _e_add(interp, _e_mul(coeff, basis))
    return interp


def modular_gcd(a, b, poly_gcd, poly_ops):
    """GCD of two nonzero monomial-content-free Poly2 values, or None when
    every deterministic restart failed (callers then fall back to PRS).

    `poly_gcd` is the public recursive entry point (used for contents and
    the leading-coefficient gcd, which live in fewer variables), and
    `poly_ops` provides (Poly2-from-terms, coefficients_in, from_coeffs).
    """
    _init_tables()
    poly2, coefficients_in, from_coefficients = poly_ops
    common = a.variables() & b.variables()
    if not common:
        return poly2(frozenset({()}))
    # main variable: smallest degree bound keeps lc and interpolation small
    main = min(common, key=lambda v: (min(a.degree_in(v), b.degree_in(v)), v))

    def content_split(p):
        coeffs = coefficients_in(p, main)
        content = None
        for d in sorted(coeffs):
            content = coeffs[d] if content is None else poly_gcd(content, coeffs[d])
            if content.is_one():
                return content, p
        return content, p.exact_div(content)

    cont_a, pp_a = content_split(a)
    cont_b, pp_b = content_split(b)
    cont = poly_gcd(cont_a, cont_b)
    da, db = pp_a.degree_in(main), pp_b.degree_in(main)
    lc_a = coefficients_in(pp_a, main)[da]
    lc_b = coefficients_in(pp_b, main)[db]
    gamma = poly_gcd(lc_a, lc_b)

    A = {m: 1 for m in pp_a.terms}
    B = {m: 1 for m in pp_b.terms}
    G = {m: 1 for m in gamma.terms}
    evars = sorted((pp_a.variables() | pp_b.variables()) - {main})

    for attempt in range(6):
        H = _interp_gcd(A, B, main, tuple(evars), G, 1 + attempt * 100003)
        if H is None:
            continue
        if _e_is_const(H):
            return cont
        if any(c != 1 for c in H.values()):
            continue  # interpolant escaped GF(2): unlucky points
        hp = poly2(frozenset(H.keys()))
        # strip the (gamma / lc) cofactor: content of H in the main variable
        coeffs = coefficients_in(hp, main)
        content = None
        for d in sorted(coeffs):
            content = coeffs[d] if content is None else poly_gcd(content, coeffs[d])
            if content.is_one():
                break
        g = hp if content.is_one() else hp.exact_div(content)
        if g.divides(pp_a) and g.divides(pp_b):
            return cont * g
    return None
