"""Exact arithmetic over GF(2): sparse multivariate polynomials and
rational functions.

A monomial is a sorted tuple of (variable, exponent) pairs with every
exponent positive; the empty tuple is the constant monomial 1. Variables
are non-negative integers (names are attached at field level, see tower).
A polynomial (Poly2) wraps a frozenset of monomials: every monomial
present has coefficient 1, so addition is symmetric difference, p + p = 0
for all p, and squaring doubles every exponent. The canonical term order
is graded lexicographic with lower variable indices ranking higher.

A rational function (RatFunc) is a numerator/denominator pair. Reduction
by GCD runs lazily: monomial factors are always stripped, but a full GCD
pass only triggers once the pair passes a size threshold, since fraction
growth rather than correctness is the concern. Equality always compares
by cross-multiplication, so unreduced pairs behave like field elements.
"""

from .errors import InvalidOperandError

# Full num/den GCD reduction kicks in at this combined term count.
GCD_REDUCE_THRESHOLD = 24


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

def mono_mul(a, b):
    """Product of two monomials (merge of sorted exponent pairs)."""
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_div(a, b):
    """a / b, or None when b does not divide a."""
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        have = exps.get(v, 0)
        if have < e:
            return None
        if have == e:
            del exps[v]
        else:
            exps[v] = have - e
    return tuple(sorted(exps.items()))


def mono_total_degree(m):
    return sum(e for _, e in m)


def mono_degree_in(m, var):
    for v, e in m:
        if v == var:
            return e
    return 0


def grlex_key(m):
    """Sort key realizing graded lex order; bigger key = bigger monomial.

    Lower variable indices rank higher within a degree block, hence the
    negated variable index in the tie-break tuple.
    """
    return (mono_total_degree(m), tuple((-v, e) for v, e in m))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class Poly2:
    """Sparse multivariate polynomial over GF(2).

    Immutable; `terms` is a frozenset of monomials. All operators are
    exact, and there is no coefficient arithmetic anywhere: presence of a
    monomial is its coefficient.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        if not isinstance(terms, frozenset):
            terms = frozenset(terms)
        object.__setattr__(self, "terms", terms)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls):
        return _ZERO

    @classmethod
    def one(cls):
        return _ONE

    @classmethod
    def variable(cls, var, exp=1):
        if exp < 0:
            raise InvalidOperandError("negative exponent")
        if exp == 0:
            return _ONE
        return cls(frozenset({((var, exp),)}))

    # -- structure ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def is_one(self):
        return self.terms == _ONE.terms

    def variables(self):
        """Set of variable indices occurring in the polynomial."""
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def max_variable(self):
        vs = self.variables()
        return max(vs) if vs else None

    def total_degree(self):
        return max((mono_total_degree(m) for m in self.terms), default=0)

    def degree_in(self, var):
        return max((mono_degree_in(m, var) for m in self.terms), default=0)

    def leading_monomial(self):
        if not self.terms:
            raise InvalidOperandError("leading monomial of zero")
        return max(self.terms, key=grlex_key)

    def sorted_terms(self):
        """Terms in canonical (grlex descending) order."""
        return sorted(self.terms, key=grlex_key, reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return Poly2(self.terms ^ other.terms)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other):
        a, b = self.terms, other.terms
        if not a or not b:
            return _ZERO
        if len(a) > len(b):
            a, b = b, a
        if a == _ONE.terms:
            return Poly2(b)
        acc = set()
        for ma in a:
            for mb in b:
                m = mono_mul(ma, mb)
                if m in acc:
                    acc.discard(m)
                else:
                    acc.add(m)
        return Poly2(frozenset(acc))

    def mul_monomial(self, mono):
        if not self.terms:
            return _ZERO
        if not mono:
            return self
        return Poly2(frozenset(mono_mul(m, mono) for m in self.terms))

    def square(self):
        return Poly2(frozenset(tuple((v, 2 * e) for v, e in m) for m in self.terms))

    def __pow__(self, n):
        if n < 0:
            raise InvalidOperandError("negative power of a polynomial")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.square()
        return result

    # -- division -----------------------------------------------------------

    def exact_div(self, d):
        """Exact quotient self / d; raises if d is zero or does not divide.

        Relies on grlex leading-term multiplicativity: at every step the
        leading term of the remainder must be divisible by LT(d).
        """
        if not d.terms:
            raise InvalidOperandError("division by zero polynomial")
        if not self.terms:
            return _ZERO
        if d.terms == _ONE.terms:
            return self
        lt_d = d.leading_monomial()
        rem = set(self.terms)
        quot = set()
        while rem:
            lt_r = max(rem, key=grlex_key)
            t = mono_div(lt_r, lt_d)
            if t is None:
                raise InvalidOperandError("inexact polynomial division")
            quot.add(t)
            for m in d.terms:
                mm = mono_mul(m, t)
                if mm in rem:
                    rem.discard(mm)
                else:
                    rem.add(mm)
        return Poly2(frozenset(quot))

    def divides(self, other):
        """True when self divides other exactly."""
        try:
            other.exact_div(self)
            return True
        except InvalidOperandError:
            return False

    # -- parity structure ----------------------------------------------------

    def parity_split(self):
        """Decompose p = sum_e s_e^2 * t^e over square-free monomials e.

        Returns {square-free monomial: Poly2 s_e}. Unique because the
        square-free monomials form a basis of GF(2)[t] over its subring of
        squares.
        """
        groups = {}
        for m in self.terms:
            sqfree = tuple((v, 1) for v, e in m if e & 1)
            half = tuple((v, e >> 1) for v, e in m if e >> 1)
            groups.setdefault(sqfree, set()).add(half)
        return {e: Poly2(frozenset(halves)) for e, halves in groups.items()}

    def is_square(self):
        return all(e % 2 == 0 for m in self.terms for _, e in m)

    def sqrt(self):
        if not self.is_square():
            raise InvalidOperandError("polynomial is not a square")
        return Poly2(frozenset(tuple((v, e >> 1) for v, e in m) for m in self.terms))

    def __repr__(self):
        return "Poly2(%s)" % poly_to_str(self)


_ZERO = Poly2(frozenset())
_ONE = Poly2(frozenset({()}))


# ---------------------------------------------------------------------------
# GCD (content / primitive part recursion, primitive PRS at the core)
# ---------------------------------------------------------------------------

def _coefficients_in(p, var):
    """View p as a polynomial in `var`: {degree: Poly2 over other vars}."""
    coeffs = {}
    for m in p.terms:
        d = mono_degree_in(m, var)
        rest = tuple((v, e) for v, e in m if v != var)
        coeffs.setdefault(d, set()).add(rest)
    return {d: Poly2(frozenset(s)) for d, s in coeffs.items()}


def _from_coefficients(coeffs, var):
    terms = set()
    for d, c in coeffs.items():
        shift = ((var, d),) if d else ()
        for m in c.terms:
            terms.add(mono_mul(m, shift))
    return Poly2(frozenset(terms))


def _leading_in(p, var):
    d = p.degree_in(var)
    return d, _coefficients_in(p, var).get(d, _ZERO)


def _pseudo_remainder(f, g, var):
    # Characteristic 2 needs no sign bookkeeping; each step scales f by
    # the leading coefficient of g, which the primitive PRS strips again.
    dg, lcg = _leading_in(g, var)
    r = f
    while r and r.degree_in(var) >= dg:
        dr, lcr = _leading_in(r, var)
        shift = Poly2.variable(var, dr - dg) if dr > dg else _ONE
        r = lcg * r + lcr * shift * g
    return r


def _content_and_primitive(p, var):
    coeffs = _coefficients_in(p, var)
    content = _ZERO
    for d in sorted(coeffs):
        content = poly_gcd(content, coeffs[d])
        if content.is_one():
            return _ONE, p
    return content, p.exact_div(content)


def poly_gcd(a, b):
    """Greatest common divisor in GF(2)[t0, t1, ...]; gcd(a, 0) = a.

    GF(2) coefficients make every nonzero polynomial monic, so the result
    is canonical without unit normalization. Monomial content splits off
    first; the rest goes to a bit-packed Euclid (univariate), a primitive
    PRS (small inputs), or the modular evaluation algorithm (everything
    else, with the PRS as verification fallback).
    """
    if not a:
        return b
    if not b:
        return a
    if a.terms == b.terms:
        return a
    if a.is_one() or b.is_one():
        return _ONE
    ma, pa = _strip_monomial_content(a)
    mb, pb = _strip_monomial_content(b)
    ea, eb = dict(ma), dict(mb)
    mono = tuple(sorted((v, min(e, eb[v])) for v, e in ea.items()
                        if v in eb and min(e, eb[v]) > 0))
    return _gcd_core(pa, pb).mul_monomial(mono)


def _gcd_core(a, b):
    if a.terms == b.terms:
        return a
    if a.is_one() or b.is_one():
        return _ONE
    va, vb = a.variables(), b.variables()
    common = va & vb
    if not common:
        return _ONE
    if len(va) == 1 and len(vb) == 1:
        v = next(iter(common))
        return _uni_unpack(_uni_euclid(_uni_pack(a, v), _uni_pack(b, v)), v)
    if (len(a.terms) + len(b.terms) <= 8
            and a.total_degree() + b.total_degree() <= 10):
        return _gcd_prs(a, b)
    from .modgcd import modular_gcd
    result = modular_gcd(a, b, poly_gcd,
                         (Poly2, _coefficients_in, _from_coefficients))
    if result is None:
        result = _gcd_prs(a, b)
    return result


def _uni_pack(p, var):
    n = 0
    for m in p.terms:
        n |= 1 << (m[0][1] if m else 0)
    return n


def _uni_unpack(n, var):
    terms = set()
    e = 0
    while n:
        if n & 1:
            terms.add(((var, e),) if e else ())
        n >>= 1
        e += 1
    return Poly2(frozenset(terms))


def _uni_euclid(x, y):
    while y:
        dx, dy = x.bit_length(), y.bit_length()
        if dx < dy:
            x, y = y, x
            dx, dy = dy, dx
        while dx >= dy:
            x ^= y << (dx - dy)
            dx = x.bit_length()
        x, y = y, x
    return x


def _gcd_prs(a, b):
    """Primitive pseudo-remainder sequence; exact but slow on big inputs."""
    mva, mvb = a.max_variable(), b.max_variable()
    var = mva if mvb is None else (mvb if mva is None else max(mva, mvb))
    ca, pa = _content_and_primitive(a, var)
    cb, pb = _content_and_primitive(b, var)
    c = poly_gcd(ca, cb)
    if pa.degree_in(var) < pb.degree_in(var):
        pa, pb = pb, pa
    while pb:
        r = _pseudo_remainder(pa, pb, var)
        if r:
            r = _content_and_primitive(r, var)[1]
        pa, pb = pb, r
    return c * pa


def poly_lcm(a, b):
    if not a or not b:
        return _ZERO
    return (a * b).exact_div(poly_gcd(a, b))


def _strip_monomial_content(p):
    """Split p = mono * q with q not divisible by any variable."""
    if not p.terms:
        return (), p
    common = None
    for m in p.terms:
        if not m:
            return (), p
        exps = dict(m)
        if common is None:
            common = exps
        else:
            common = {v: min(e, exps[v]) for v, e in common.items() if v in exps}
        if not common:
            return (), p
    mono = tuple(sorted(common.items()))
    return mono, Poly2(frozenset(mono_div(m, mono) for m in p.terms))


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

class RatFunc:
    """Element of GF(2)(t0, t1, ...) as a num/den pair of Poly2.

    Zero is canonically (0, 1). The stored pair need not be fully reduced
    (see module docstring); `normalize` always returns the unique reduced
    representative.
    """

    __slots__ = ("num", "den", "_reduced")

    def __init__(self, num, den=None, _reduced=False):
        if den is None:
            den = _ONE
        if not den:
            raise InvalidOperandError("zero denominator")
        if not num:
            num, den, _reduced = _ZERO, _ONE, True
        elif num.terms == den.terms:
            num, den, _reduced = _ONE, _ONE, True
        elif den.terms == _ONE.terms:
            _reduced = True
        elif not _reduced:
            # always strip shared monomial factors; full GCD only when big
            mn, num2 = _strip_monomial_content(num)
            md, den2 = _strip_monomial_content(den)
            if mn or md:
                shared = dict()
                for v, e in mn:
                    shared[v] = e
                keep_n, keep_d = [], []
                for v, e in md:
                    c = min(shared.get(v, 0), e)
                    if e - c:
                        keep_d.append((v, e - c))
                    if shared.get(v, 0):
                        shared[v] -= c
                for v, e in shared.items():
                    if e:
                        keep_n.append((v, e))
                num = num2.mul_monomial(tuple(sorted(keep_n)))
                den = den2.mul_monomial(tuple(sorted(keep_d)))
            if len(num.terms) + len(den.terms) >= GCD_REDUCE_THRESHOLD:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                _reduced = True
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_reduced", _reduced)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls):
        return _RF_ZERO

    @classmethod
    def one(cls):
        return _RF_ONE

    @classmethod
    def from_poly(cls, p):
        return cls(p, _ONE)

    @classmethod
    def variable(cls, var, exp=1):
        return cls(Poly2.variable(var, exp), _ONE)

    # -- structure ----------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num.terms == self.den.terms

    def normalize(self):
        """Fully reduced representative (idempotent)."""
        if self._reduced:
            return self
        g = poly_gcd(self.num, self.den)
        if g.is_one():
            return RatFunc(self.num, self.den, _reduced=True)
        return RatFunc(self.num.exact_div(g), self.den.exact_div(g), _reduced=True)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.den.terms == other.den.terms:
            return self.num.terms == other.num.terms
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        n = self.normalize()
        return hash((n.num.terms, n.den.terms))

    # -- field operations ----------------------------------------------------

    def __add__(self, other):
        if self.den.terms == other.den.terms:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __sub__ = __add__

    def __mul__(self, other):
        if not self.num or not other.num:
            return _RF_ZERO
        return RatFunc(self.num * other.num, self.den * other.den)

    def invert(self):
        if not self.num:
            raise InvalidOperandError("inverting zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * other.invert()

    def square(self):
        return RatFunc(self.num.square(), self.den.square(),
                       _reduced=self._reduced)

    def is_square(self):
        """True iff the element is a square in GF(2)(t): equivalent to
        num*den having only even exponents."""
        return (self.num * self.den).is_square()

    def sqrt(self):
        p = self.num * self.den
        if not p.is_square():
            raise InvalidOperandError("rational function is not a square")
        return RatFunc(p.sqrt(), self.den)

    def __repr__(self):
        return "RatFunc(%s)" % ratfunc_to_str(self)


_RF_ZERO = RatFunc(_ZERO, _ONE, _reduced=True)
_RF_ONE = RatFunc(_ONE, _ONE, _reduced=True)


def frobenius_split(x, variables=None):
    """Write x in GF(2)(t) as sum_e s_e^2 * t^e over square-free monomials.

    Returns {square-free monomial: RatFunc s_e}; the decomposition is
    exact and unique. Implementation: x = (num*den)/den^2, split num*den
    by exponent parity per variable, halve the even parts.

    `variables`, when given, is a containment check only: the support of
    x must lie inside it.
    """
    if variables is not None:
        used = x.num.variables() | x.den.variables()
        if not used <= set(variables):
            raise InvalidOperandError("element uses variables outside the split set")
    den = x.den
    split = (x.num * den).parity_split()
    return {e: RatFunc(s, den) for e, s in split.items()}


def frobenius_recompose(parts):
    """Inverse of frobenius_split: sum_e s_e^2 * t^e."""
    acc = _RF_ZERO
    for e, s in parts.items():
        sq = s.square()
        acc = acc + RatFunc(sq.num.mul_monomial(e), sq.den)
    return acc


# ---------------------------------------------------------------------------
# Canonical printing (names supplied by the caller; see tower / cli)
# ---------------------------------------------------------------------------

def _default_name(v):
    return "t%d" % v


def mono_to_str(m, names=None):
    if not m:
        return "1"
    parts = []
    for v, e in m:
        name = names[v] if names is not None else _default_name(v)
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts)


def poly_to_str(p, names=None):
    if not p.terms:
        return "0"
    return " + ".join(mono_to_str(m, names) for m in p.sorted_terms())


def ratfunc_to_str(x, names=None):
    n = x.normalize()
    if n.den.is_one():
        return poly_to_str(n.num, names)
    return "(%s)/(%s)" % (poly_to_str(n.num, names), poly_to_str(n.den, names))
