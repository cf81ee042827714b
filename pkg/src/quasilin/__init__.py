"""Exact computational algebra for quasilinear quadratic forms over
finitely generated fields of characteristic 2.

Layers, bottom up: `basefield` (sparse GF(2) polynomials and rational
functions with their square/square-root structure), `tower` (iterated
square-root extensions with interleaved transcendentals), `semilinear`
(Frobenius descent of systems sum x_j^2 A_j = B to exact linear algebra
over the rational base), `qform` (forms and their invariants),
`splitting` (function fields of quadrics and splitting towers),
`harness` (the statement suite, the optimality construction, and the
seeded fuzz campaign), and `cli` (the session-script runner).
"""

from .basefield import Poly2, RatFunc, frobenius_split, poly_gcd
from .errors import (BudgetExceededError, FieldMismatchError,
                     InternalCheckError, InvalidOperandError,
                     NameCollisionError, QuasilinError, ScriptError,
                     SplitFormError, SquareRadicandError)
from .harness import (ConjectureReport, InstanceSpec, OptimalityExample,
                      build_optimality_example, check_conjecture,
                      construct_interpolating_form, defect, fuzz_campaign,
                      random_anisotropic_form)
from .qform import PfisterForm, QForm, dim_bracket_exponent, form_to_str
from .semilinear import (KernelDescription, SemilinearSystem, rank_over_field,
                         solve_affine, solve_homogeneous)
from .splitting import (DEFAULT_VAR_BUDGET, FunctionFieldStep,
                        SplittingTowerRecord, affine_function_field,
                        check_tower_invariants, extend_and_index,
                        knebusch_tower)
from .tower import FieldTower, TowerElement, element_to_str, tower_to_script

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError", "ConjectureReport", "DEFAULT_VAR_BUDGET",
    "FieldMismatchError", "FieldTower", "FunctionFieldStep", "InstanceSpec",
    "InternalCheckError", "InvalidOperandError", "KernelDescription",
    "NameCollisionError", "OptimalityExample", "PfisterForm", "Poly2",
    "QForm", "QuasilinError", "RatFunc", "ScriptError", "SemilinearSystem",
    "SplitFormError", "SplittingTowerRecord", "SquareRadicandError",
    "TowerElement", "affine_function_field", "build_optimality_example",
    "check_conjecture", "check_tower_invariants",
    "construct_interpolating_form", "defect", "dim_bracket_exponent",
    "element_to_str", "extend_and_index", "form_to_str", "frobenius_split",
    "fuzz_campaign", "knebusch_tower", "poly_gcd", "random_anisotropic_form",
    "rank_over_field", "solve_affine", "solve_homogeneous",
    "tower_to_script",
]
