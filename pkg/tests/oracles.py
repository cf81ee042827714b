"""Independent test oracles.

These deliberately avoid the package's solver path:

* `lowdeg_isotropy_witness` searches for isotropy vectors whose
  coordinates are GF(2)-combinations of low-degree monomials times root
  products. Expanding such a candidate turns the isotropy equation into
  plain GF(2) linear algebra over a fixed coordinate window, so the
  search is exhaustive for that window and exact: any witness it finds
  is re-verified by substitution before being returned.

* `evaluation_rank` evaluates a rational-function matrix at random
  points of GF(2^15) (carryless arithmetic over a primitive trinomial)
  and computes numeric ranks; the max over sample points lower-bounds
  the exact rank and detects rank overcounts.

* sympy's GF(2) polynomial ring, where it works, cross-checks GCDs.
"""

import itertools
import random

from quasilin.basefield import Poly2, RatFunc, poly_lcm

# ---------------------------------------------------------------------------
# GF(2^15) via the primitive trinomial x^15 + x + 1
# ---------------------------------------------------------------------------

_MOD = (1 << 15) | 0b11
_TOP = 1 << 15


def gf15_mul(a, b):
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        if a & _TOP:
            a ^= _MOD
        b >>= 1
    return acc


def gf15_pow(a, e):
    acc, base = 1, a
    while e:
        if e & 1:
            acc = gf15_mul(acc, base)
        base = gf15_mul(base, base)
        e >>= 1
    return acc


def gf15_inv(a):
    assert a
    return gf15_pow(a, (1 << 15) - 2)


def eval_poly(p, point):
    """Evaluate Poly2 at {var: GF(2^15) element}."""
    acc = 0
    for mono in p.terms:
        term = 1
        for v, e in mono:
            term = gf15_mul(term, gf15_pow(point[v], e))
        acc ^= term
    return acc


def eval_ratfunc(x, point):
    den = eval_poly(x.den, point)
    if den == 0:
        raise ZeroDivisionError
    return gf15_mul(eval_poly(x.num, point), gf15_inv(den))


def numeric_rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        inv = gf15_inv(rows[0][col])
        head = rows.pop(0)
        rank += 1
        for r in rows:
            if r[col]:
                f = gf15_mul(r[col], inv)
                for c in range(col, ncols):
                    r[c] ^= gf15_mul(f, head[c])
        col += 1
    return rank


def evaluation_rank(matrix, samples=20, seed=0):
    """Max numeric rank of a RatFunc matrix over random GF(2^15) points."""
    variables = set()
    for row in matrix:
        for entry in row:
            variables |= entry.num.variables() | entry.den.variables()
    rng = random.Random(seed)
    best = 0
    done = 0
    while done < samples:
        point = {v: rng.randrange(1, 1 << 15) for v in variables}
        try:
            rows = [[eval_ratfunc(e, point) for e in row] for row in matrix]
        except ZeroDivisionError:
            continue
        done += 1
        best = max(best, numeric_rank(rows))
    return best


# ---------------------------------------------------------------------------
# Exhaustive low-degree isotropy search (GF(2) window)
# ---------------------------------------------------------------------------

def _window_monomials(n_vars, max_total_degree):
    monos = []
    for degs in itertools.product(range(max_total_degree + 1), repeat=n_vars):
        if sum(degs) <= max_total_degree:
            monos.append(tuple((v, d) for v, d in enumerate(degs) if d))
    return monos


def gf2_nullspace(rows, ncols):
    """Kernel basis of a GF(2) matrix given as row bitmasks."""
    pivots = []  # (column, reduced row)
    for r in rows:
        for col, pv in pivots:
            if r >> col & 1:
                r ^= pv
        if r:
            col = (r & -r).bit_length() - 1
            for i, (c, pv) in enumerate(pivots):
                if pv >> col & 1:
                    pivots[i] = (c, pv ^ r)
            pivots.append((col, r))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for c, pv in pivots:
            if pv >> free & 1:
                vec |= 1 << c
        basis.append(vec)
    return basis


def lowdeg_isotropy_witness(form, max_total_degree=2):
    """Exhaustive isotropy search over candidate vectors with
    coordinates sum lambda * monomial * root-product, lambda in GF(2),
    monomials of total degree <= bound. Returns a verified witness tuple
    or None if the whole window contains no isotropy vector."""
    tower = form.tower
    monos = _window_monomials(tower.n_vars, max_total_degree)
    masks = range(1 << tower.n_roots)
    unknowns = []
    columns = []
    for j, c in enumerate(form.coeffs):
        for e in masks:
            base = tower._uexp(e) * c
            for m in monos:
                sq = Poly2(frozenset({tuple((v, 2 * d) for v, d in m)}))
                elem = tower.from_ratfunc(RatFunc(sq)) * base
                unknowns.append((j, m, e))
                columns.append(elem)
    # one common denominator keeps the GF(2) system homogeneous
    den = Poly2.one()
    for elem in columns:
        for coord in elem.coords.values():
            if not coord.den.is_one():
                den = poly_lcm(den, coord.den)
    den_rf = RatFunc(den)
    coord_bits = {}
    col_vectors = []
    for elem in columns:
        scaled = tower.from_ratfunc(den_rf) * elem
        vec = 0
        for f, coord in scaled.coords.items():
            coord = coord.normalize()
            assert coord.den.is_one()
            for mono in coord.num.terms:
                key = (f, mono)
                bit = coord_bits.setdefault(key, len(coord_bits))
                vec ^= 1 << bit
        col_vectors.append(vec)
    # transpose: one GF(2) row per coordinate position
    rows = []
    for bit in range(len(coord_bits)):
        r = 0
        for j, vec in enumerate(col_vectors):
            if vec >> bit & 1:
                r |= 1 << j
        rows.append(r)
    kernel = gf2_nullspace(rows, len(col_vectors))
    if not kernel:
        return None
    choice = kernel[0]
    vector = []
    for j in range(form.dim):
        coords = {}
        for idx, (jj, m, e) in enumerate(unknowns):
            if jj == j and choice >> idx & 1:
                rf = RatFunc(Poly2(frozenset({m})))
                coords[e] = coords[e] + rf if e in coords else rf
        vector.append(tower.element(coords))
    if all(v.is_zero() for v in vector):
        return None
    acc = tower.zero()
    for v, c in zip(vector, form.coeffs):
        acc = acc + v.square() * c
    assert acc.is_zero(), "oracle witness failed substitution"
    return tuple(vector)


# ---------------------------------------------------------------------------
# sympy bridge (guarded: sympy's GF(2) PRS sometimes fails internally)
# ---------------------------------------------------------------------------

def sympy_gcd_or_none(a, b):
    try:
        from sympy.polys.domains import GF
        from sympy.polys.rings import ring
    except Exception:
        return None
    variables = sorted(a.variables() | b.variables())
    if not variables:
        return Poly2.one() if a and b else None
    names = " ".join("v%d" % v for v in variables)
    R, *gens = ring(names, GF(2))
    index = {v: i for i, v in enumerate(variables)}

    def lift(p):
        out = R.zero
        for mono in p.terms:
            term = R.one
            for v, e in mono:
                term = term * gens[index[v]] ** e
            out = out + term
        return out

    try:
        g = lift(a).gcd(lift(b))
    except Exception:
        return None
    terms = set()
    for mono, coeff in g.terms():
        assert int(coeff) % 2 == 1
        terms.add(tuple((variables[i], e) for i, e in enumerate(mono) if e))
    return Poly2(frozenset(terms))
