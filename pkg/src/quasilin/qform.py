"""Diagonal quasilinear quadratic forms <a_1,...,a_n> over a field tower
and their invariants.

A form is an ordered coefficient list; it sends (x_1,...,x_n) to
sum a_i x_i^2, so its isotropic vectors form a linear subspace and its
value set D is the span of the coefficients over the squares of the
field. Everything here reduces to semilinear solves: the isotropy index
is a kernel dimension, representation is an affine solve, and the
anisotropic part is a greedy maximal independent subsequence of the
coefficients (kept in canonical order for reproducibility).

Isometry is value-set equality of anisotropic parts, never an explicit
change of basis. All invariant computations are cached on the form,
which is immutable.
"""

from .errors import FieldMismatchError, InternalCheckError, InvalidOperandError
from .semilinear import PreparedSystem, SemilinearSystem, solve_homogeneous


def dim_bracket_exponent(dim):
    """The unique s >= -1 with 2^s < dim <= 2^(s+1), for dim >= 1."""
    if dim < 1:
        raise InvalidOperandError("dimension must be positive")
    return (dim - 1).bit_length() - 1


class QForm:
    """Quasilinear quadratic form: a tower plus an ordered coefficient
    tuple (zero entries permitted; they only raise the isotropy index)."""

    __slots__ = ("tower", "coeffs", "_cache")

    def __init__(self, tower, coeffs):
        self.tower = tower
        self.coeffs = tuple(tower._coerce(c) for c in coeffs)
        self._cache = {}

    @property
    def dim(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __eq__(self, other):
        return (isinstance(other, QForm) and self.tower == other.tower
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return "QForm(%s)" % form_to_str(self)

    def _same_tower(self, other):
        if self.tower._key != other.tower._key:
            raise FieldMismatchError("forms live over different towers")

    # -- construction ---------------------------------------------------------

    def tensor(self, other):
        self._same_tower(other)
        return QForm(self.tower,
                     [a * b for a in self.coeffs for b in other.coeffs])

    def perp(self, other):
        self._same_tower(other)
        return QForm(self.tower, self.coeffs + other.coeffs)

    def scale(self, a):
        a = self.tower._coerce(a)
        if a.is_zero():
            raise InvalidOperandError("scaling a form by zero")
        return QForm(self.tower, [a * c for c in self.coeffs])

    def embed_into(self, tower):
        """Scalar extension along a prefix-tower embedding."""
        return QForm(tower, [tower.embed(c) for c in self.coeffs])

    # -- isotropy -------------------------------------------------------------

    def _prepared(self):
        ps = self._cache.get("prepared")
        if ps is None:
            ps = PreparedSystem(self.tower, list(self.coeffs))
            self._cache["prepared"] = ps
        return ps

    def isotropy_kernel(self):
        kd = self._cache.get("kernel")
        if kd is None:
            if not self.coeffs:
                from .semilinear import KernelDescription
                kd = KernelDescription(0, [], 0)
            else:
                kd = self._prepared().kernel_description()
            self._cache["kernel"] = kd
        return kd

    def isotropy_index(self):
        """dim of the space of isotropic vectors; 0 iff anisotropic."""
        return self.isotropy_kernel().dim_over_L

    def isotropy_witnesses(self):
        return self.isotropy_kernel().basis

    def is_anisotropic(self):
        return self.isotropy_index() == 0

    def anisotropic_part(self):
        """Greedy maximal independent subsequence of the coefficients;
        value set is preserved, dimension drops by the isotropy index."""
        part = self._cache.get("anisotropic")
        if part is not None:
            return part
        kept = []
        kept_form = None
        for c in self.coeffs:
            if c.is_zero():
                continue
            if kept_form is None or not kept_form.represents(c):
                kept.append(c)
                kept_form = QForm(self.tower, kept)
        part = kept_form if kept_form is not None else QForm(self.tower, [])
        if part.dim != self.dim - self.isotropy_index():
            raise InternalCheckError(
                "anisotropic part has dim %d, expected %d - %d"
                % (part.dim, self.dim, self.isotropy_index()))
        self._cache["anisotropic"] = part
        part._cache.setdefault("kernel", None)
        part._cache["anisotropic"] = part
        from .semilinear import KernelDescription
        part._cache["kernel"] = KernelDescription(
            0, [], part.dim * self.tower.degree_over_rational())
        return part

    # -- representation and subforms -------------------------------------------

    def represent_witness(self, a):
        """Vector v with self(v) = a, or None."""
        a = self.tower._coerce(a)
        if not self.coeffs:
            return () if a.is_zero() else None
        return self._prepared().affine_witness(a)

    def represents(self, a):
        """Membership a in D(self)."""
        return self.represent_witness(a) is not None

    def is_subform_of(self, other):
        """Subform test on anisotropic parts: value-set containment."""
        self._same_tower(other)
        mine = self.anisotropic_part()
        theirs = other.anisotropic_part()
        return all(theirs.represents(c) for c in mine.coeffs)

    def is_isometric_to(self, other):
        self._same_tower(other)
        return (self.dim == other.dim and self.is_subform_of(other)
                and other.is_subform_of(self))

    # -- norm form and quasi-Pfister structure ----------------------------------

    def norm_form(self):
        """The quasi-Pfister form whose value set is generated by the
        pairwise coefficient ratios; its fold count is lndeg."""
        pf = self._cache.get("norm_form")
        if pf is not None:
            return pf
        nonzero = [c for c in self.coeffs if c]
        if not nonzero:
            raise InvalidOperandError("norm form of the zero form")
        a0 = nonzero[0]
        slots = []
        span = QForm(self.tower, [self.tower.one()])
        for c in nonzero[1:]:
            b = a0 * c
            if not span.represents(b):
                slots.append(b)
                span = span.perp(span.scale(b))
        for c in nonzero:
            if not span.represents(a0 * c):
                raise InternalCheckError("norm form misses a scaled coefficient")
        pf = PfisterForm(self.tower, slots)
        self._cache["norm_form"] = pf
        return pf

    def lndeg(self):
        return len(self.norm_form().slots)

    def is_similar_to_quasi_pfister(self):
        if not self.is_anisotropic():
            return False
        return self.dim == 1 << self.lndeg()

    def is_quasi_pfister(self):
        return self.is_similar_to_quasi_pfister() and self.represents(1)

    def quasi_pfister_neighbour_info(self):
        """(is_neighbour, lndeg, s) for an anisotropic form: neighbour
        means the norm degree is as small as the dimension allows."""
        if self.dim < 1:
            raise InvalidOperandError("neighbour test needs dim >= 1")
        if not self.is_anisotropic():
            raise InvalidOperandError("neighbour test needs an anisotropic form")
        s = dim_bracket_exponent(self.dim)
        ln = self.lndeg()
        return (ln == s + 1, ln, s)

    def is_quasi_pfister_neighbour(self):
        return self.quasi_pfister_neighbour_info()[0]

    # -- similarity factors ------------------------------------------------------

    def is_similarity_factor(self, a):
        """a * D(self) inside D(self); tested on the coefficient basis."""
        a = self.tower._coerce(a)
        if a.is_zero():
            return False
        return all(self.represents(a * c) for c in self.coeffs)

    def similarity_field(self):
        """Generators g_1,...,g_d of the field of similarity factors over
        the squares: the factor set is the span of the square-free
        products of the g_i. Computed by intersecting the value sets of
        the coefficient-rescaled forms; every generator is re-verified by
        direct membership checks."""
        slots = self._cache.get("similarity")
        if slots is not None:
            return slots
        if not self.is_anisotropic():
            raise InvalidOperandError("similarity field needs an anisotropic form")
        if self.dim == 0:
            return []
        normalized = self.scale(self.coeffs[0].invert())
        current = list(normalized.coeffs)
        for i in range(1, normalized.dim):
            inv = normalized.coeffs[i].invert()
            target = [inv * c for c in normalized.coeffs]
            current = _intersect_spans(self.tower, current, target)
            if len(current) == 1:
                break
        slots = []
        span = QForm(self.tower, [self.tower.one()])
        for g in current:
            if not span.represents(g):
                slots.append(g)
                span = span.perp(span.scale(g))
        if 1 << len(slots) != len(current):
            raise InternalCheckError(
                "similarity factor set has size %d, not a power of two"
                % len(current))
        for g in slots:
            if not self.is_similarity_factor(g):
                raise InternalCheckError("similarity generator fails aD(q) in D(q)")
        self._cache["similarity"] = slots
        return slots

    # -- divisibility ---------------------------------------------------------------

    def divide_by_quasi_pfister(self, pf):
        """Quotient q = pf (x) sigma, built greedily; requires that the
        value set of pf multiplies D(self) into itself."""
        base = self.anisotropic_part()
        for g in pf.slots:
            for c in base.coeffs:
                if not base.represents(g * c):
                    raise InvalidOperandError(
                        "form is not divisible by the given quasi-Pfister form")
        pi = pf.expand()
        sigma = []
        covered = None
        for c in base.coeffs:
            if covered is None or not covered.represents(c):
                sigma.append(c)
                covered = covered.perp(pi.scale(c)) if covered else pi.scale(c)
        if len(sigma) * pi.dim != base.dim:
            raise InternalCheckError(
                "quotient of dim %d against divisor of dim %d cannot tile dim %d"
                % (len(sigma), pi.dim, base.dim))
        return QForm(self.tower, sigma)

    def divisibility_witness(self):
        """(index, divisor, quotient) with divisor a maximal anisotropic
        quasi-Pfister divisor; the tensor reconstruction is re-verified
        against the form's value set."""
        wit = self._cache.get("div_witness")
        if wit is not None:
            return wit
        slots = self.similarity_field()
        pf = PfisterForm(self.tower, slots)
        quotient = self.divide_by_quasi_pfister(pf)
        product = pf.expand().tensor(quotient)
        base = self.anisotropic_part()
        if product.dim != base.dim:
            raise InternalCheckError("divisor reconstruction has wrong dimension")
        if not all(base.represents(c) for c in product.coeffs):
            raise InternalCheckError("divisor reconstruction leaves D(q)")
        if not all(product.represents(c) for c in base.coeffs):
            raise InternalCheckError("divisor reconstruction loses part of D(q)")
        wit = (len(slots), pf, quotient)
        self._cache["div_witness"] = wit
        return wit

    def divisibility_index(self):
        return self.divisibility_witness()[0]


class PfisterForm:
    """Quasi-Pfister form as its slot list; expands to the tensor product
    of the binary forms <1, a_i> (dimension 2^n, the 0-fold case is <1>)."""

    __slots__ = ("tower", "slots")

    def __init__(self, tower, slots):
        self.tower = tower
        self.slots = tuple(tower._coerce(a) for a in slots)
        if any(a.is_zero() for a in self.slots):
            raise InvalidOperandError("zero Pfister slot")

    @property
    def fold(self):
        return len(self.slots)

    @property
    def dim(self):
        return 1 << len(self.slots)

    def expand(self):
        form = QForm(self.tower, [self.tower.one()])
        for a in self.slots:
            form = QForm(self.tower, [self.tower.one(), a]).tensor(form)
        return form

    def __repr__(self):
        return "PfisterForm(<<%s>>)" % ", ".join(
            _element_str(a) for a in self.slots)


def _intersect_spans(tower, gens_a, gens_b):
    """Independent generators of the intersection of two spans of scalars
    over the squares of the tower. The intersection is the image of the
    kernel of the joined homogeneous system, and the image of an L-basis
    of that kernel spans it."""
    kd = solve_homogeneous(SemilinearSystem(tower, list(gens_a) + list(gens_b)))
    values = []
    for witness in kd.basis:
        acc = tower.zero()
        for x, g in zip(witness[:len(gens_a)], gens_a):
            if x:
                acc = acc + x.square() * g
        if acc:
            values.append(acc)
    return _independent_scalars(tower, values)


def _independent_scalars(tower, scalars):
    kept = []
    form = None
    for s in scalars:
        if s.is_zero():
            continue
        if form is None or not form.represents(s):
            kept.append(s)
            form = QForm(tower, kept)
    return kept


def _element_str(a):
    from .tower import element_to_str
    return element_to_str(a)


def form_to_str(q):
    return "<%s>" % ", ".join(_element_str(c) for c in q.coeffs)
