"""Function fields of quasilinear quadrics and splitting towers.

The affine function field of a non-split form <a_0,...,a_n> (a_0 the
first nonzero coefficient) is realized as the tower extension
F(X_1,...,X_n)(sqrt(a_0^-1 (a_1 X_1^2 + ... + a_n X_n^2))). The radicand
is a non-square exactly because the form is not split, and the extended
form is isotropic there with an explicit witness that gets re-verified
by substitution. All invariants computed over this affine model agree
with their projective-function-field values because they are insensitive
to purely transcendental extension steps.

Iterating scalar extension and anisotropic parts yields the splitting
tower of a form, recorded level by level with the higher isotropy
indices, divisibility indices and norm degrees. Tower construction is
guarded by a transcendental-variable budget: exceeding it produces an
explicit partial record, never a wrong answer.
"""

from fractions import Fraction

from .errors import (BudgetExceededError, FieldMismatchError,
                     InternalCheckError, SplitFormError, SquareRadicandError)
from .qform import QForm, dim_bracket_exponent

DEFAULT_VAR_BUDGET = 12


def _fresh_names(tower, count, prefix="X"):
    taken = set(tower.var_names) | set(tower.root_names)
    names = []
    i = 1
    while len(names) < count:
        name = "%s%d" % (prefix, i)
        if name not in taken:
            names.append(name)
            taken.add(name)
        i += 1
    return names


class FunctionFieldStep:
    """One scalar extension to the affine function field of a form:
    base tower, fresh variables, the adjoined radicand, and the
    resulting tower, plus the verified isotropy witness of the form."""

    __slots__ = ("form", "base_tower", "extended_tower", "variable_names",
                 "root_name", "radicand", "isotropy_vector")

    def __init__(self, form, base_tower, extended_tower, variable_names,
                 root_name, radicand, isotropy_vector):
        self.form = form
        self.base_tower = base_tower
        self.extended_tower = extended_tower
        self.variable_names = variable_names
        self.root_name = root_name
        self.radicand = radicand
        self.isotropy_vector = isotropy_vector


def affine_function_field(q, var_budget=DEFAULT_VAR_BUDGET):
    """Extend the base tower of q to the affine function field of q.

    Requires dim of the anisotropic part >= 2; refuses (with an explicit
    budget error) when the fresh variables would exceed the budget.
    """
    if q.anisotropic_part().dim < 2:
        raise SplitFormError("split forms have no function field")
    n_fresh = q.dim - 1
    if var_budget is not None and q.tower.n_vars + n_fresh > var_budget:
        raise BudgetExceededError(
            "function field needs %d variables on top of %d (budget %d)"
            % (n_fresh, q.tower.n_vars, var_budget))
    names = _fresh_names(q.tower, n_fresh)
    mid = q.tower.adjoin_transcendentals(tuple(names))
    coeffs = [mid.embed(c) for c in q.coeffs]
    lead = next(i for i, c in enumerate(coeffs) if c)
    rest = [i for i in range(len(coeffs)) if i != lead]
    radicand = mid.zero()
    for name, i in zip(names, rest):
        radicand = radicand + coeffs[i] * mid.variable(name).square()
    radicand = coeffs[lead].invert() * radicand
    try:
        extended = mid.adjoin_sqrt(radicand)
    except SquareRadicandError:
        raise InternalCheckError(
            "function-field radicand of a non-split form was a square")
    root_name = extended.root_names[-1]
    # isotropy witness: the new root at the leading slot, X_i elsewhere
    vector = [extended.zero()] * len(coeffs)
    vector[lead] = extended.root(extended.n_roots - 1)
    for name, i in zip(names, rest):
        vector[i] = extended.variable(name)
    value = extended.zero()
    for v, c in zip(vector, coeffs):
        value = value + v.square() * extended.embed(c)
    if not value.is_zero():
        raise InternalCheckError("function-field isotropy witness failed")
    return FunctionFieldStep(q, q.tower, extended, tuple(names), root_name,
                             radicand, tuple(vector))


class ExtensionIndices:
    """Isotropy index and defect of a form after a function-field step."""

    __slots__ = ("isotropy_index", "defect")

    def __init__(self, isotropy_index, defect):
        self.isotropy_index = isotropy_index
        self.defect = defect

    def __iter__(self):
        return iter((self.isotropy_index, self.defect))


def extend_and_index(q, step):
    """i0 and dim - 2*i0 of q over the step's function field."""
    if q.tower._key != step.base_tower._key:
        raise FieldMismatchError("form does not live over the step's base tower")
    extended = q.embed_into(step.extended_tower)
    i0 = extended.isotropy_index()
    defect = q.dim - 2 * i0
    if defect < 0 and q.is_anisotropic():
        raise InternalCheckError(
            "negative defect %d for an anisotropic form after extension" % defect)
    return ExtensionIndices(i0, defect)


class SplittingStep:
    """Per-level record: the form, its dimension, the isotropy jump into
    this level, and its norm-degree / divisibility invariants."""

    __slots__ = ("level", "form", "dim", "i_r", "lndeg", "div_index",
                 "similar_to_qp")

    def __init__(self, level, form, i_r):
        self.level = level
        self.form = form
        self.dim = form.dim
        self.i_r = i_r
        if form.dim:
            self.lndeg = form.lndeg()
            self.div_index = form.divisibility_index()
        else:
            self.lndeg = 0
            self.div_index = 0
        self.similar_to_qp = form.dim <= 1 or form.dim == 1 << self.lndeg

    def as_dict(self):
        return {"dim": self.dim, "i_r": self.i_r, "d_r": self.div_index,
                "lndeg": self.lndeg}


class SplittingTowerRecord:
    """The full splitting record of a form; `complete` is False when the
    variable budget stopped the tower early (a partial result, never a
    wrong one)."""

    __slots__ = ("base_form", "steps", "complete", "var_budget")

    def __init__(self, base_form, steps, complete, var_budget):
        self.base_form = base_form
        self.steps = steps
        self.complete = complete
        self.var_budget = var_budget

    @property
    def height(self):
        return len(self.steps) - 1 if self.complete else None

    @property
    def quasi_pfister_height(self):
        for st in self.steps:
            if st.similar_to_qp:
                return st.level
        return None

    @property
    def maximal_splitting(self):
        first = self.steps[0]
        if first.dim < 2 or len(self.steps) < 2:
            return None
        s = dim_bracket_exponent(first.dim)
        return self.steps[1].i_r == first.dim - (1 << s)

    def as_dict(self):
        return {
            "steps": [st.as_dict() for st in self.steps],
            "height": self.height,
            "hqp": self.quasi_pfister_height,
            "maximal_splitting": self.maximal_splitting,
            "complete": self.complete,
        }


def knebusch_tower(q, var_budget=DEFAULT_VAR_BUDGET):
    """Iterated anisotropic parts over successive function fields.

    Level 0 holds the anisotropic part of q (with i_r = i0 of q itself);
    level r holds the anisotropic part over the r-th function field.
    Stops with a partial record when the variable budget runs out.
    """
    current = q.anisotropic_part()
    steps = [SplittingStep(0, current, q.isotropy_index())]
    complete = True
    while current.dim >= 2:
        try:
            step = affine_function_field(current, var_budget)
        except BudgetExceededError:
            complete = False
            break
        extended = current.embed_into(step.extended_tower)
        nxt = extended.anisotropic_part()
        if nxt.dim >= current.dim:
            raise InternalCheckError(
                "splitting tower did not shrink: %d -> %d"
                % (current.dim, nxt.dim))
        steps.append(SplittingStep(len(steps), nxt, current.dim - nxt.dim))
        current = nxt
    return SplittingTowerRecord(q, steps, complete, var_budget)


# ---------------------------------------------------------------------------
# Named invariants of a splitting record
# ---------------------------------------------------------------------------

class InvariantReport:
    """Pass/fail per named invariant with a counterexample payload."""

    __slots__ = ("results",)

    def __init__(self):
        self.results = {}

    def record(self, name, ok, detail=None):
        if name in self.results and self.results[name][0] == "fail":
            return
        status = "pass" if ok else "fail"
        self.results[name] = (status, detail if not ok else None)

    def not_applicable(self, name):
        self.results.setdefault(name, ("n/a", None))

    @property
    def ok(self):
        return all(status != "fail" for status, _ in self.results.values())

    @property
    def failures(self):
        return {name: detail for name, (status, detail) in self.results.items()
                if status == "fail"}

    def as_dict(self):
        return {name: {"status": status, "detail": detail}
                for name, (status, detail) in sorted(self.results.items())}


def check_tower_invariants(record):
    """Evaluate the proven facts about a splitting record, one named
    verdict per statement; `detail` carries the offending level data."""
    report = InvariantReport()
    steps = record.steps
    first = steps[0]

    for r in range(1, len(steps)):
        prev, cur = steps[r - 1], steps[r]
        report.record("lndeg_drops_by_one", cur.lndeg == prev.lndeg - 1,
                      {"level": r, "lndeg": cur.lndeg, "prev": prev.lndeg})
        report.record("i_r_le_2_pow_d_r", cur.i_r <= 1 << cur.div_index,
                      {"level": r, "i_r": cur.i_r, "d_r": cur.div_index})
        if not prev.similar_to_qp:
            report.record("i_r_divisible_by_2_pow_d_prev",
                          cur.i_r % (1 << prev.div_index) == 0,
                          {"level": r, "i_r": cur.i_r, "d_prev": prev.div_index})
        report.record("dim_drops_by_i_r", cur.dim == prev.dim - cur.i_r,
                      {"level": r})
    if len(steps) < 2:
        for name in ("lndeg_drops_by_one", "i_r_le_2_pow_d_r",
                     "i_r_divisible_by_2_pow_d_prev", "dim_drops_by_i_r"):
            report.not_applicable(name)

    if first.dim >= 2 and len(steps) >= 2:
        s = dim_bracket_exponent(first.dim)
        report.record("i1_le_dim_minus_2_pow_s",
                      steps[1].i_r <= first.dim - (1 << s),
                      {"i1": steps[1].i_r, "dim": first.dim, "s": s})
        qpn = first.lndeg == s + 1
        report.record("qpn_iff_next_level_similar_to_qp",
                      qpn == steps[1].similar_to_qp,
                      {"qpn": qpn, "next_similar_qp": steps[1].similar_to_qp})
        if record.maximal_splitting and Fraction(first.dim) > \
                (1 << s) + Fraction(2) ** (s - 2):
            report.record("maximal_splitting_implies_qpn", qpn,
                          {"dim": first.dim, "s": s, "lndeg": first.lndeg})
        else:
            report.not_applicable("maximal_splitting_implies_qpn")
    else:
        for name in ("i1_le_dim_minus_2_pow_s",
                     "qpn_iff_next_level_similar_to_qp",
                     "maximal_splitting_implies_qpn"):
            report.not_applicable(name)

    if record.complete:
        total = sum(st.i_r for st in steps[1:])
        report.record("indices_telescope",
                      total == first.dim - steps[-1].dim,
                      {"sum": total, "dim0": first.dim, "dim_h": steps[-1].dim})
        report.record("ends_split", steps[-1].dim <= 1, {"dim_h": steps[-1].dim})
    else:
        report.not_applicable("indices_telescope")
        report.not_applicable("ends_split")
    return report
