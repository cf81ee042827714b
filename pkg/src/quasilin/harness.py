"""Executable versions of the main statements about isotropy over
function fields: the defect invariant, the dimension-gap statements (in
the base power-of-two form and the refined norm-degree form), the
separation and divisibility bounds, the optimality construction, and the
greedy interpolating-form construction; plus a seeded random-instance
campaign that checks all of it on concrete data.

A failed check of a proven statement is treated as a bug in this package
and dumps a minimal runnable reproducer script. The statements that are
open in general (the refined decomposition outside its proven
hypotheses) are tallied separately as evidence, never as failures.
"""

import json
import random
import time
from fractions import Fraction

from .basefield import Poly2, RatFunc
from .errors import BudgetExceededError, InternalCheckError, InvalidOperandError
from .qform import PfisterForm, QForm, dim_bracket_exponent, form_to_str
from .splitting import (DEFAULT_VAR_BUDGET, affine_function_field,
                        check_tower_invariants, extend_and_index,
                        knebusch_tower)
from .tower import FieldTower, tower_to_script


def defect(q):
    """dim(q) - 2 * i0(q); negative only for quite degenerate forms."""
    return q.dim - 2 * q.isotropy_index()


def decomposition_witness(dim_q, k, modulus):
    """(a, eps) with dim_q = a*modulus + eps, a >= 0, |eps| <= k, picking
    the smallest |eps|; None when no such decomposition exists."""
    if k < 0:
        return None
    best = None
    for a in range(0, dim_q // modulus + 2):
        eps = dim_q - a * modulus
        if -k <= eps <= k:
            cand = (abs(eps), -eps, a)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    return (best[2], -best[1])


def _refined_by_reformulation(dim_q, i0, lndeg_p):
    """The interval form of the refined statement: some multiple of
    2^(lndeg - 1) lies in [i0, dim_q - i0]."""
    half = 1 << (lndeg_p - 1)
    a_min = -(-i0 // half)
    return a_min * half <= dim_q - i0


class ConjectureReport:
    """Everything measured and decided for one (p, q) pair."""

    __slots__ = ("dim_p", "dim_q", "s", "lndeg_p", "d0_q", "i0", "k",
                 "modulus", "witness", "verdicts", "evidence", "q_equals_p")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    @property
    def proven_failures(self):
        return sorted(name for name, v in self.verdicts.items() if v == "fail")

    def as_dict(self):
        return {
            "dim_p": self.dim_p, "dim_q": self.dim_q, "s": self.s,
            "lndeg_p": self.lndeg_p, "d0_q": self.d0_q, "i0": self.i0,
            "k": self.k, "modulus": self.modulus,
            "witness": list(self.witness) if self.witness else None,
            "verdicts": dict(sorted(self.verdicts.items())),
            "evidence": dict(sorted(self.evidence.items())),
        }


def check_conjecture(p, q, var_budget=DEFAULT_VAR_BUDGET):
    """Compute i0 of q over the function field of p once, then evaluate
    every named statement at this pair.

    Statements carrying a proven hypothesis get pass/fail/n-a verdicts;
    the raw existence of the two decompositions lands in `evidence`.
    """
    if p.dim < 2 or q.dim < 2:
        raise InvalidOperandError("conjecture check needs dims >= 2")
    if not p.is_anisotropic() or not q.is_anisotropic():
        raise InvalidOperandError("conjecture check needs anisotropic forms")
    s = dim_bracket_exponent(p.dim)
    lndeg_p = p.lndeg()
    if lndeg_p < s + 1:
        raise InternalCheckError("norm degree %d below the dimension bound %d"
                                 % (lndeg_p, s + 1))
    d0_q = q.divisibility_index()
    step = affine_function_field(p, var_budget)
    i0 = extend_and_index(q, step).isotropy_index
    k = q.dim - 2 * i0

    base_wit = decomposition_witness(q.dim, k, 1 << (s + 1))
    ref_wit = decomposition_witness(q.dim, k, 1 << lndeg_p)
    if (ref_wit is not None) != _refined_by_reformulation(q.dim, i0, lndeg_p):
        raise InternalCheckError("refined decomposition disagrees with its "
                                 "interval reformulation")

    two = Fraction(2)
    p_qpn = lndeg_p == s + 1
    refined_hyps = {
        "refined_when_k_small": Fraction(k) <= two ** (s - 1),
        "refined_when_p_neighbour": p_qpn,
        "refined_when_k_le_min_bound": Fraction(k) <= min(
            Fraction(p.dim) - two ** (s - 1) - two ** (s - 2) + 1,
            Fraction((1 << s) - 1)),
    }
    base_hyps = {
        "base_when_dim_p_near_top":
            Fraction(p.dim) >= two ** (s + 1) - two ** (s - 2) - 3,
        "base_when_dim_p_le_8": p.dim <= 8,
        "base_when_dim_q_near_power": any(
            (1 << n) <= q.dim <= (1 << n) + (1 << (s + 1))
            for n in range(q.dim.bit_length() + 1)),
        "base_when_dim_q_small": q.dim <= (1 << (s + 2)) + (1 << (s + 1)),
    }

    verdicts = {
        "k_nonnegative": "pass" if k >= 0 else "fail",
        "k_divisible_by_2_pow_d0_q":
            "pass" if k % (1 << d0_q) == 0 else "fail",
        "separation_bound":
            "pass" if i0 <= max(0, q.dim - (1 << s)) else "fail",
    }
    for name, hyp in refined_hyps.items():
        verdicts[name] = "n/a" if not hyp else (
            "pass" if ref_wit is not None else "fail")
    for name, hyp in base_hyps.items():
        verdicts[name] = "n/a" if not hyp else (
            "pass" if base_wit is not None else "fail")
    if ref_wit is not None and base_wit is None:
        # lndeg >= s+1 makes the refined decomposition imply the base one
        raise InternalCheckError("refined decomposition without a base one")

    if 2 * i0 == q.dim:
        ok = q.dim % (1 << lndeg_p) == 0 and all(
            q.is_similarity_factor(g) for g in p.norm_form().slots)
        verdicts["half_dim_implies_norm_form_divides"] = "pass" if ok else "fail"
    else:
        verdicts["half_dim_implies_norm_form_divides"] = "n/a"

    q_equals_p = p.dim == q.dim and all(
        a == b for a, b in zip(p.coeffs, q.coeffs))
    if q_equals_p:
        verdicts["refined_iff_neighbour_for_q_equals_p"] = (
            "pass" if (ref_wit is not None) == p_qpn else "fail")
    else:
        verdicts["refined_iff_neighbour_for_q_equals_p"] = "n/a"

    if ref_wit is not None:
        modulus, witness = 1 << lndeg_p, ref_wit
    elif base_wit is not None:
        modulus, witness = 1 << (s + 1), base_wit
    else:
        modulus, witness = 1 << (s + 1), None
    return ConjectureReport(
        dim_p=p.dim, dim_q=q.dim, s=s, lndeg_p=lndeg_p, d0_q=d0_q, i0=i0,
        k=k, modulus=modulus, witness=witness, verdicts=verdicts,
        evidence={
            "base_decomposition_exists": base_wit is not None,
            "refined_decomposition_exists": ref_wit is not None,
        },
        q_equals_p=q_equals_p)


# ---------------------------------------------------------------------------
# Optimality construction
# ---------------------------------------------------------------------------

class OptimalityExample:
    """The constructed field and pair, plus the values the construction
    predicts for verification by an actual extension computation."""

    __slots__ = ("tower", "p", "q", "sigma", "tau", "predicted_i0",
                 "predicted_k", "a", "k", "l", "eps")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])


def build_optimality_example(p, a, k, l, var_budget=DEFAULT_VAR_BUDGET):
    """Build q of dimension a*2^lndeg(p) + (k - 2l) whose defect over the
    function field of p is exactly k.

    Shape: (norm form of p) tensor <X_1..X_{a-1}>, plus X_a times a
    codimension-l subform of the norm form chosen to contain a subform
    that survives as the anisotropic part of the norm form over the
    function field, plus a free tail <X_{a+1}..X_{a+eps+l}>.
    """
    if not p.is_anisotropic() or p.dim < 2:
        raise InvalidOperandError("construction needs an anisotropic p, dim >= 2")
    lndeg_p = p.lndeg()
    if a < 1:
        raise InvalidOperandError("a must be at least 1")
    if not 0 <= k < (1 << lndeg_p):
        raise InvalidOperandError("k must satisfy 0 <= k < 2^lndeg(p)")
    if not 0 <= 2 * l <= k:
        raise InvalidOperandError("l must satisfy 0 <= l <= k/2")
    eps = k - 2 * l
    norm = p.norm_form().expand()
    half = 1 << (lndeg_p - 1)

    # tau: the part of the norm form that stays anisotropic over the
    # function field of p (greedy independent coefficient selection there)
    step = affine_function_field(p, var_budget)
    ext_coeffs = [step.extended_tower.embed(c) for c in norm.coeffs]
    tau_idx = []
    kept = None
    for idx, c in enumerate(ext_coeffs):
        if kept is None or not kept.represents(c):
            tau_idx.append(idx)
            kept = QForm(step.extended_tower,
                         [ext_coeffs[i] for i in tau_idx])
    if len(tau_idx) != half:
        raise InternalCheckError(
            "norm form of p kept dimension %d over the function field, "
            "expected %d" % (len(tau_idx), half))
    sigma_idx = list(tau_idx)
    for idx in range(norm.dim):
        if len(sigma_idx) == norm.dim - l:
            break
        if idx not in tau_idx:
            sigma_idx.append(idx)
    sigma = QForm(p.tower, [norm.coeffs[i] for i in sorted(sigma_idx)])
    tau = QForm(p.tower, [norm.coeffs[i] for i in tau_idx])

    n_fresh = a + eps + l
    from .splitting import _fresh_names
    names = _fresh_names(p.tower, n_fresh)
    if var_budget is not None and p.tower.n_vars + n_fresh > var_budget:
        raise BudgetExceededError("construction needs %d fresh variables"
                                  % n_fresh)
    F = p.tower.adjoin_transcendentals(tuple(names))
    xs = [F.variable(n) for n in names]
    coeffs = []
    for x in xs[:a - 1]:
        coeffs.extend(x * F.embed(c) for c in norm.coeffs)
    coeffs.extend(xs[a - 1] * F.embed(c) for c in sigma.coeffs)
    coeffs.extend(xs[a:])
    q = QForm(F, coeffs)
    if q.dim != a * (1 << lndeg_p) + eps:
        raise InternalCheckError("constructed q has dimension %d, expected %d"
                                 % (q.dim, a * (1 << lndeg_p) + eps))
    if not q.is_anisotropic():
        raise InternalCheckError("constructed q is isotropic over the "
                                 "transcendental extension")
    return OptimalityExample(
        tower=F, p=p.embed_into(F), q=q, sigma=sigma, tau=tau,
        predicted_i0=a * half - l, predicted_k=k, a=a, k=k, l=l, eps=eps)


# ---------------------------------------------------------------------------
# Interpolating form (greedy subform closure under the radicand)
# ---------------------------------------------------------------------------

class InterpolationResult:
    __slots__ = ("tau", "i", "l", "tower_k", "tower_l", "radicand",
                 "defect_sigma", "defect_phi", "defect_tau")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])


def construct_interpolating_form(sigma, nu, var_budget=DEFAULT_VAR_BUDGET):
    """Grow sigma (over the rational extension K that carries the generic
    value w of nu) into a form tau inside the anisotropic part of
    sigma (x) nu, closed under multiplication by w; tau then has defect 0
    over K(sqrt(w)), which pins the two defect bounds that are checked
    numerically before returning."""
    if not sigma.is_anisotropic() or not nu.is_anisotropic():
        raise InvalidOperandError("construction needs anisotropic forms")
    if nu.dim < 2:
        raise InvalidOperandError("nu must have dimension >= 2")
    nu_n = nu.scale(nu.coeffs[0].invert())  # now 1 is a value of nu
    phi = sigma.tensor(nu_n).anisotropic_part()
    l = phi.dim - sigma.dim
    if l < 0:
        raise InternalCheckError("sigma does not embed into its tensor closure")

    n = nu_n.dim - 1
    from .splitting import _fresh_names
    if var_budget is not None and sigma.tower.n_vars + n > var_budget:
        raise BudgetExceededError("interpolation needs %d fresh variables" % n)
    names = _fresh_names(sigma.tower, n)
    K = sigma.tower.adjoin_transcendentals(tuple(names))
    w = K.zero()
    for name, c in zip(names, nu_n.coeffs[1:]):
        w = w + K.embed(c) * K.variable(name).square()
    L = K.adjoin_sqrt(w)

    phi_k = phi.embed_into(K)
    tau = sigma.embed_into(K)
    grown = True
    while grown:
        grown = False
        for b in tau.coeffs:
            wb = w * b
            if not tau.represents(wb):
                if not phi_k.represents(wb):
                    raise InternalCheckError(
                        "closure left the tensor product's value set")
                tau = tau.perp(QForm(K, [wb]))
                grown = True
                break
    i = tau.dim - sigma.dim

    defect_tau = defect(tau.embed_into(L))
    defect_sigma = defect(sigma.embed_into(K).embed_into(L))
    defect_phi = defect(phi_k.embed_into(L))
    if defect_tau != 0:
        raise InternalCheckError("closed form has nonzero defect %d" % defect_tau)
    if defect_sigma > i or defect_phi > l - i:
        raise InternalCheckError(
            "defect bounds violated: d(sigma_L)=%d vs i=%d, d(phi_L)=%d vs l-i=%d"
            % (defect_sigma, i, defect_phi, l - i))
    return InterpolationResult(
        tau=tau, i=i, l=l, tower_k=K, tower_l=L, radicand=w,
        defect_sigma=defect_sigma, defect_phi=defect_phi, defect_tau=defect_tau)


# ---------------------------------------------------------------------------
# Seeded random instances and the fuzz campaign
# ---------------------------------------------------------------------------

class InstanceSpec:
    """Deterministic generation parameters; replay is exact per seed."""

    __slots__ = ("seed", "count", "n_vars", "dim_p", "dim_q", "max_terms",
                 "max_degree", "var_budget", "timeout_s")

    def __init__(self, seed=0, count=50, n_vars=3, dim_p=(2, 6), dim_q=(2, 6),
                 max_terms=3, max_degree=2, var_budget=DEFAULT_VAR_BUDGET,
                 timeout_s=None):
        self.seed = seed
        self.count = count
        self.n_vars = n_vars
        self.dim_p = tuple(dim_p)
        self.dim_q = tuple(dim_q)
        self.max_terms = max_terms
        self.max_degree = max_degree
        self.var_budget = var_budget
        self.timeout_s = timeout_s

    def as_dict(self):
        return {name: getattr(self, name) for name in self.__slots__}


def random_polynomial(rng, n_vars, max_terms, max_degree):
    """Nonzero sparse polynomial with small support; the sampling bias
    toward few terms and low degree keeps splitting towers inside the
    variable budget."""
    while True:
        terms = set()
        for _ in range(rng.randint(1, max_terms)):
            mono = tuple((v, rng.randint(1, max_degree))
                         for v in range(n_vars) if rng.random() < 0.5)
            terms.add(mono)
        p = Poly2(frozenset(terms))
        if p:
            return p


def random_anisotropic_form(rng, tower, dim_range, max_terms=3, max_degree=2):
    """Random diagonal form reduced to its anisotropic part; retries
    until that part has dimension >= 2."""
    for _ in range(64):
        dim = rng.randint(dim_range[0], dim_range[1])
        coeffs = [tower.from_ratfunc(RatFunc(random_polynomial(
            rng, tower.n_vars, max_terms, max_degree))) for _ in range(dim)]
        part = QForm(tower, coeffs).anisotropic_part()
        if dim_range[0] <= part.dim <= dim_range[1] and part.dim >= 2:
            return part
    raise InternalCheckError("could not sample an anisotropic form")


class CampaignReport:
    """Aggregated per-statement counters plus minimal reproducers for
    anything that failed. Deterministic bytes for a given spec."""

    __slots__ = ("spec", "counters", "evidence", "reproducers", "items_run",
                 "items_skipped", "partial")

    def __init__(self, spec):
        self.spec = spec
        self.counters = {}
        self.evidence = {}
        self.reproducers = []
        self.items_run = 0
        self.items_skipped = 0
        self.partial = False

    def tally(self, name, status):
        slot = self.counters.setdefault(
            name, {"pass": 0, "fail": 0, "skipped": 0, "n/a": 0})
        slot[status] += 1

    def tally_evidence(self, name, holds):
        slot = self.evidence.setdefault(name, {"holds": 0, "open": 0})
        slot["holds" if holds else "open"] += 1

    @property
    def failed_statements(self):
        return sorted(name for name, c in self.counters.items() if c["fail"])

    def as_dict(self):
        return {
            "schema": "quasilin/1",
            "spec": self.spec.as_dict(),
            "items_run": self.items_run,
            "items_skipped": self.items_skipped,
            "partial": self.partial,
            "statements": {k: dict(v) for k, v in sorted(self.counters.items())},
            "evidence": {k: dict(v) for k, v in sorted(self.evidence.items())},
            "reproducers": self.reproducers,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def _reproducer_script(tower, forms, command):
    lines = [tower_to_script(tower)]
    for name, form in forms:
        lines.append("form %s = %s" % (name, form_to_str(form)))
    lines.append(command)
    return "\n".join(lines)


def fuzz_campaign(spec):
    """Run the conjecture suite and the tower invariants over seeded
    random anisotropic instances; any proven-statement failure dumps a
    runnable reproducer into the report."""
    report = CampaignReport(spec)
    deadline = None
    if spec.timeout_s is not None:
        deadline = time.monotonic() + spec.timeout_s
    base = FieldTower.rational(*["t%d" % (i + 1) for i in range(spec.n_vars)])
    for item in range(spec.count):
        if deadline is not None and time.monotonic() > deadline:
            report.partial = True
            report.items_skipped += spec.count - item
            break
        rng = random.Random(spec.seed * 1000003 + item)
        p = random_anisotropic_form(rng, base, spec.dim_p,
                                    spec.max_terms, spec.max_degree)
        q = random_anisotropic_form(rng, base, spec.dim_q,
                                    spec.max_terms, spec.max_degree)
        try:
            conj = check_conjecture(p, q, spec.var_budget)
        except BudgetExceededError:
            report.items_skipped += 1
            continue
        report.items_run += 1
        for name, status in conj.verdicts.items():
            report.tally(name, status)
            if status == "fail":
                report.reproducers.append({
                    "item": item, "statement": name,
                    "script": _reproducer_script(
                        base, [("p", p), ("q", q)], "check p q"),
                })
        for name, holds in conj.evidence.items():
            report.tally_evidence(name, holds)

        try:
            rec = knebusch_tower(p, spec.var_budget)
        except BudgetExceededError:
            rec = None
        if rec is None or not rec.complete:
            report.tally("tower_completed_within_budget", "skipped")
        else:
            report.tally("tower_completed_within_budget", "pass")
            inv = check_tower_invariants(rec)
            for name, (status, detail) in inv.results.items():
                report.tally("tower_" + name, status)
                if status == "fail":
                    report.reproducers.append({
                        "item": item, "statement": "tower_" + name,
                        "detail": detail,
                        "script": _reproducer_script(
                            base, [("p", p)], "tower p"),
                    })
    return report
