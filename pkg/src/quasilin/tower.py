"""Field towers L = GF(2)(t1,...,tm)(sqrt(u1),...,sqrt(ur)) and their
element arithmetic.

A tower is an ordered list of named transcendentals plus an ordered list
of square-root stages; stage j may reference only variables and roots
introduced before it, and later transcendentals may be interleaved
between stages. Each radicand is checked to be a non-square in its
prefix tower at construction, so the 2^r products of roots form a basis
of L over K = GF(2)(t1,...,tm).

Elements are sparse coordinate vectors over K indexed by root subsets
(bitmasks): {e: c_e} represents sum_e c_e * sqrt(u)^e. Multiplication
reduces products of root-subset basis elements through the radicands
(memoized per tower); squaring lands strictly below the top root used,
which drives the recursive inversion x^-1 = (x^2)^-1 * x.

Towers and elements are immutable. Extension returns a new tower, and
old elements embed by coordinate reuse, so every element always knows
its exact field; arithmetic across distinct towers is rejected.
"""

from .basefield import RatFunc, ratfunc_to_str
from .errors import (FieldMismatchError, InvalidOperandError,
                     NameCollisionError, SquareRadicandError)


class _Stage:
    """One square-root extension step: the radicand's coordinates over
    the prefix tower, the root's name, and how many variables were
    visible when it was adjoined (validation metadata only)."""

    __slots__ = ("coords", "root_name", "n_vars")

    def __init__(self, coords, root_name, n_vars):
        self.coords = coords  # tuple of (mask, normalized RatFunc), sorted
        self.root_name = root_name
        self.n_vars = n_vars

    def key(self):
        return (self.root_name,
                tuple((m, c.num.terms, c.den.terms) for m, c in self.coords))


class FieldTower:
    """A field GF(2)(vars)(sqrt(u1),...,sqrt(ur)), possibly with later
    transcendentals interleaved between the roots."""

    __slots__ = ("var_names", "stages", "_var_index", "_basis_cache",
                 "_uexp_cache", "_key")

    def __init__(self, var_names=(), stages=()):
        names = tuple(var_names)
        seen = set()
        for n in names:
            if n in seen:
                raise NameCollisionError("duplicate variable name %r" % n)
            seen.add(n)
        for st in stages:
            if st.root_name in seen:
                raise NameCollisionError("duplicate name %r" % st.root_name)
            seen.add(st.root_name)
        self.var_names = names
        self.stages = tuple(stages)
        self._var_index = {n: i for i, n in enumerate(names)}
        self._basis_cache = {}
        self._uexp_cache = {}
        self._key = (names, tuple(st.key() for st in self.stages))

    @classmethod
    def rational(cls, *var_names):
        """The rational function field GF(2)(var_names)."""
        return cls(var_names, ())

    # -- structure ----------------------------------------------------------

    @property
    def n_vars(self):
        return len(self.var_names)

    @property
    def n_roots(self):
        return len(self.stages)

    @property
    def root_names(self):
        return tuple(st.root_name for st in self.stages)

    def degree_over_rational(self):
        return 1 << self.n_roots

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def is_prefix_of(self, other):
        """True when other extends self by more variables and/or roots."""
        if len(self.var_names) > len(other.var_names):
            return False
        if other.var_names[:len(self.var_names)] != self.var_names:
            return False
        if len(self.stages) > len(other.stages):
            return False
        return all(a.key() == b.key()
                   for a, b in zip(self.stages, other.stages))

    def __repr__(self):
        base = "GF2(%s)" % ",".join(self.var_names)
        for st in self.stages:
            base += "(%s=sqrt(%s))" % (
                st.root_name,
                element_to_str(TowerElement(self, dict(st.coords))))
        return base

    # -- element constructors -------------------------------------------------

    def zero(self):
        return TowerElement(self, {})

    def one(self):
        return TowerElement(self, {0: RatFunc.one()})

    def from_ratfunc(self, x):
        return TowerElement(self, {0: x} if x else {})

    def variable(self, name):
        if name not in self._var_index:
            raise KeyError("unknown variable %r" % name)
        return self.from_ratfunc(RatFunc.variable(self._var_index[name]))

    def var_index(self, name):
        return self._var_index[name]

    def root(self, j):
        """The j-th adjoined root (0-based) as an element."""
        if not 0 <= j < self.n_roots:
            raise IndexError("no root %d" % j)
        return TowerElement(self, {1 << j: RatFunc.one()})

    def named(self, name):
        """Look a name up among variables and roots."""
        if name in self._var_index:
            return self.variable(name)
        for j, st in enumerate(self.stages):
            if st.root_name == name:
                return self.root(j)
        raise KeyError("unknown name %r" % name)

    def element(self, coords):
        return TowerElement(self, dict(coords))

    # -- extension -------------------------------------------------------------

    def adjoin_transcendentals(self, names):
        """Extend by fresh transcendentals; existing elements embed
        unchanged via `embed`."""
        names = tuple(names)
        if not names:
            return self
        taken = set(self.var_names) | set(self.root_names)
        for n in names:
            if n in taken or not n:
                raise NameCollisionError("name %r already in use" % n)
            taken.add(n)
        return FieldTower(self.var_names + names, self.stages)

    def adjoin_sqrt(self, radicand, root_name=None):
        """Extend by the square root of `radicand`.

        The radicand must be a nonzero non-square of this tower; the new
        root r satisfies r^2 = radicand exactly.
        """
        radicand = self._coerce(radicand)
        if radicand.is_zero():
            raise InvalidOperandError("cannot adjoin sqrt of zero")
        if radicand.is_square():
            raise SquareRadicandError(
                "radicand is already a square; call sqrt instead")
        if root_name is None:
            taken = set(self.var_names) | set(self.root_names)
            j = self.n_roots + 1
            while "r%d" % j in taken:
                j += 1
            root_name = "r%d" % j
        elif root_name in self.var_names or root_name in self.root_names:
            raise NameCollisionError("name %r already in use" % root_name)
        coords = tuple(sorted((m, c.normalize())
                              for m, c in radicand.coords.items()))
        stage = _Stage(coords, root_name, self.n_vars)
        return FieldTower(self.var_names, self.stages + (stage,))

    def embed(self, x):
        """Reinterpret an element of a prefix tower in this tower."""
        if x.tower is self or x.tower._key == self._key:
            return TowerElement(self, x.coords)
        if not x.tower.is_prefix_of(self):
            raise FieldMismatchError("element does not come from a prefix tower")
        return TowerElement(self, x.coords)

    def _coerce(self, x):
        if isinstance(x, TowerElement):
            if x.tower is self or x.tower._key == self._key:
                return x
            raise FieldMismatchError("element belongs to a different tower")
        if isinstance(x, int) and x in (0, 1):
            return self.one() if x else self.zero()
        if isinstance(x, RatFunc):
            return self.from_ratfunc(x)
        raise TypeError("cannot interpret %r as a tower element" % (x,))

    # -- basis reduction (memoized per tower) -----------------------------------

    def _radicand_element(self, j):
        return TowerElement(self, dict(self.stages[j].coords))

    def _uexp(self, e):
        """The product of radicands over the bits of e, expanded."""
        cached = self._uexp_cache.get(e)
        if cached is not None:
            return cached
        if e == 0:
            result = self.one()
        else:
            j = e.bit_length() - 1
            result = self._uexp(e ^ (1 << j)) * self._radicand_element(j)
        self._uexp_cache[e] = result
        return result

    def _basis_product(self, e, f):
        """Coords of sqrt(u)^e * sqrt(u)^f in the root-subset basis."""
        if e & f == 0:
            return {e | f: RatFunc.one()}
        key = (e, f) if e <= f else (f, e)
        cached = self._basis_cache.get(key)
        if cached is not None:
            return cached
        j = (e & f).bit_length() - 1  # highest shared root: r_j^2 = u_j
        rest = TowerElement(self, self._basis_product(e ^ (1 << j), f ^ (1 << j)))
        result = (rest * self._radicand_element(j)).coords
        self._basis_cache[key] = result
        return result


class TowerElement:
    """Element of a FieldTower: {root-subset mask: RatFunc coordinate}."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower, coords):
        if any(not c for c in coords.values()):
            coords = {m: c for m, c in coords.items() if c}
        self.tower = tower
        self.coords = coords

    # -- structure ----------------------------------------------------------

    def is_zero(self):
        return not self.coords

    def __bool__(self):
        return bool(self.coords)

    def is_one(self):
        return set(self.coords) == {0} and self.coords[0].is_one()

    def _check(self, other):
        other = self.tower._coerce(other)
        return other

    def __eq__(self, other):
        if isinstance(other, int) and other in (0, 1):
            return self.is_one() if other else self.is_zero()
        if not isinstance(other, TowerElement):
            return NotImplemented
        if self.tower._key != other.tower._key:
            return False
        if set(self.coords) != set(other.coords):
            return False
        return all(self.coords[m] == other.coords[m] for m in self.coords)

    def __hash__(self):
        items = tuple(sorted((m, c.normalize()) for m, c in self.coords.items()))
        return hash((self.tower._key,
                     tuple((m, c.num.terms, c.den.terms) for m, c in items)))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        coords = dict(self.coords)
        for m, c in other.coords.items():
            prev = coords.get(m)
            coords[m] = c if prev is None else prev + c
        return TowerElement(self.tower, coords)

    __sub__ = __add__
    __radd__ = __add__

    def __mul__(self, other):
        other = self._check(other)
        if not self.coords or not other.coords:
            return self.tower.zero()
        coords = {}
        for e, a in self.coords.items():
            for f, b in other.coords.items():
                c = a * b
                for g, w in self.tower._basis_product(e, f).items():
                    term = c if w.is_one() else c * w
                    prev = coords.get(g)
                    coords[g] = term if prev is None else prev + term
        return TowerElement(self.tower, coords)

    __rmul__ = __mul__

    def square(self):
        """x^2; lands strictly below the top root used by x."""
        acc = self.tower.zero()
        for e, c in self.coords.items():
            sq = c.square()
            u = self.tower._uexp(e)
            acc = acc + TowerElement(self.tower,
                                     {m: sq * w for m, w in u.coords.items()})
        return acc

    def invert(self):
        if not self.coords:
            raise InvalidOperandError("inverting zero")
        top = max(m.bit_length() for m in self.coords) - 1
        if top < 0:
            return TowerElement(self.tower, {0: self.coords[0].invert()})
        y = self.square()
        # squaring eliminates the top root, so the recursion terminates
        assert all(m < (1 << top) for m in y.coords)
        return y.invert() * self

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.invert()

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.square()
        return result

    # -- squareness (decided through the semilinear solver) --------------------

    def is_square(self):
        """True iff the element lies in L^2: decided by solving w^2 = x,
        an affine rank-1 semilinear system."""
        if not self.coords:
            return True
        return self.sqrt_or_none() is not None

    def sqrt_or_none(self):
        if not self.coords:
            return self.tower.zero()
        from .semilinear import scalar_affine_witness
        witness = scalar_affine_witness(self.tower, [self.tower.one()], self)
        return witness[0] if witness is not None else None

    def sqrt(self):
        root = self.sqrt_or_none()
        if root is None:
            raise InvalidOperandError("element is not a square in its tower")
        return root

    def __repr__(self):
        return "TowerElement(%s)" % element_to_str(self)


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------

def element_to_str(x):
    """Canonical, re-parsable rendering: masks ascending, each term a
    parenthesized coordinate times its root product."""
    if not x.coords:
        return "0"
    names = x.tower.var_names
    roots = x.tower.root_names
    parts = []
    for m in sorted(x.coords):
        c = ratfunc_to_str(x.coords[m], names)
        bits = [roots[j] for j in range(m.bit_length()) if m >> j & 1]
        if not bits:
            parts.append(c)
        elif c == "1":
            parts.append("*".join(bits))
        else:
            parts.append("(%s)*%s" % (c, "*".join(bits)))
    return " + ".join(parts)


def tower_to_script(tower):
    """Serialize the tower as a session-script prefix (deterministic
    round-trip through the CLI grammar)."""
    lines = []
    emitted = 0

    def emit_vars(upto):
        nonlocal emitted
        if not lines:
            first = max(upto, 1) if tower.var_names else 0
            lines.append("field GF2(%s)" % ",".join(tower.var_names[:first]))
            emitted = first
        while emitted < upto:
            lines.append("adjoin var %s" % tower.var_names[emitted])
            emitted += 1

    for st in tower.stages:
        emit_vars(st.n_vars)
        rad = element_to_str(TowerElement(tower, dict(st.coords)))
        lines.append("adjoin %s = sqrt(%s)" % (st.root_name, rad))
    emit_vars(tower.n_vars)
    if not lines:
        lines.append("field GF2()")
    return "\n".join(lines)
