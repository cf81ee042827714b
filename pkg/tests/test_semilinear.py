import random

import pytest

from quasilin.basefield import Poly2, RatFunc
from quasilin.errors import InvalidOperandError
from quasilin.semilinear import (PreparedSystem, SemilinearSystem,
                                 rank_over_field, solve_affine,
                                 solve_homogeneous)
from quasilin.tower import FieldTower

from oracles import evaluation_rank


@pytest.fixture
def F():
    return FieldTower.rational("t1", "t2")


def substitute(columns, witness, tower):
    n = len(columns[0]) if isinstance(columns[0], tuple) else 1
    cols = [c if isinstance(c, tuple) else (c,) for c in columns]
    out = []
    for i in range(n):
        acc = tower.zero()
        for x, col in zip(witness, cols):
            acc = acc + x.square() * col[i]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# homogeneous solves
# ---------------------------------------------------------------------------

def test_independent_scalars_have_trivial_kernel(F):
    kd = solve_homogeneous(SemilinearSystem(F, [F.one(), F.variable("t1")]))
    assert kd.dim_over_L == 0
    assert kd.basis == []


def test_char2_sum_kernel(F):
    t1 = F.variable("t1")
    kd = solve_homogeneous(SemilinearSystem(F, [F.one(), t1, F.one() + t1]))
    assert kd.dim_over_L == 1
    (w,) = kd.basis
    assert all(x.is_one() for x in w)


def test_tower_kernel_dimension(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    Fr = F.adjoin_sqrt(t1)
    cols = [Fr.one(), Fr.embed(t1), Fr.embed(t2), Fr.embed(t1 * t2)]
    kd = solve_homogeneous(SemilinearSystem(Fr, cols))
    assert kd.dim_over_L == 2
    assert kd.rank_over_K == 4
    for w in kd.basis:
        assert all(v.is_zero() for v in substitute(cols, w, Fr))


def test_kernel_invariant_rank_accounting(F):
    rng = random.Random(0)
    Fr = F.adjoin_sqrt(F.variable("t1"))
    for _ in range(10):
        cols = [Fr.element({0: RatFunc(Poly2.variable(rng.randrange(2),
                                                      rng.randint(1, 2)))})
                + Fr.root(0) * Fr.one() * rng.randint(0, 1)
                for _ in range(rng.randint(1, 4))]
        cols = [c for c in cols if c]
        if not cols:
            continue
        kd = solve_homogeneous(SemilinearSystem(Fr, cols))
        r = Fr.n_roots
        assert kd.rank_over_K + (1 << r) * kd.dim_over_L == len(cols) * (1 << r)


def test_scaling_invariance(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    cols = [F.one(), t1, t2, t1 + t2.square()]
    lam = t1 * t2 + F.one()
    base = solve_homogeneous(SemilinearSystem(F, cols)).dim_over_L
    scaled = solve_homogeneous(
        SemilinearSystem(F, [lam * c for c in cols])).dim_over_L
    assert base == scaled


def test_appending_column_monotonicity(F):
    rng = random.Random(1)
    t1, t2 = F.variable("t1"), F.variable("t2")
    pool = [F.one(), t1, t2, t1 * t2, t1 + t2, t2.square() + t1]
    cols = [pool[0]]
    prev = solve_homogeneous(SemilinearSystem(F, cols))
    for c in pool[1:]:
        cols.append(c)
        cur = solve_homogeneous(SemilinearSystem(F, cols))
        assert cur.rank_over_K >= prev.rank_over_K
        assert cur.dim_over_L - prev.dim_over_L in (0, 1)
        prev = cur


def test_empty_columns_rejected(F):
    with pytest.raises(InvalidOperandError):
        solve_homogeneous(SemilinearSystem(F, []))


def test_vector_columns(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    one, zero = F.one(), F.zero()
    cols = [(one, zero), (zero, one), (t1, t2), (t1 + one, t2 + one)]
    kd = solve_homogeneous(SemilinearSystem(F, cols))
    # x1^2 (1,0) + x2^2 (0,1) + x3^2 (t1,t2) + x4^2 (t1+1, t2+1) = 0
    # has the solution (1, 1, 1, 1)
    assert kd.dim_over_L == 1
    for w in kd.basis:
        assert all(v.is_zero() for v in substitute(cols, w, F))


# ---------------------------------------------------------------------------
# affine solves
# ---------------------------------------------------------------------------

def test_affine_witness(F):
    t1 = F.variable("t1")
    w = solve_affine(SemilinearSystem(F, [F.one(), t1], rhs=F.one() + t1))
    assert w is not None
    (val,) = substitute([F.one(), t1], w, F)
    assert val == F.one() + t1


def test_affine_unsolvable(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    assert solve_affine(SemilinearSystem(F, [F.one(), t1], rhs=t2)) is None


def test_affine_in_tower(F):
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1)
    w = solve_affine(SemilinearSystem(Fr, [Fr.one()], rhs=Fr.embed(t1)))
    assert w == (Fr.root(0),)


def test_affine_zero_rhs(F):
    w = solve_affine(SemilinearSystem(F, [F.variable("t1")], rhs=F.zero()))
    assert w is not None and w[0].is_zero()


def test_prepared_system_reuse(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    ps = PreparedSystem(F, [F.one(), t1])
    assert ps.affine_witness(t1 + F.one()) is not None
    assert ps.affine_witness(t2) is None
    assert ps.affine_witness(t1.square() * (t1 + F.one())) is not None


# ---------------------------------------------------------------------------
# rank over the rational field
# ---------------------------------------------------------------------------

def test_rank_identity():
    one, zero = RatFunc.one(), RatFunc.zero()
    rank, kernel = rank_over_field([[one, zero, zero],
                                    [zero, one, zero],
                                    [zero, zero, one]])
    assert rank == 3 and kernel == []


def test_rank_proportional_rows():
    t1 = RatFunc(Poly2.variable(0))
    rank, kernel = rank_over_field([[t1, t1.square()],
                                    [RatFunc.one(), t1]])
    assert rank == 1
    assert len(kernel) == 1
    v = kernel[0]
    assert v[0] * t1 + v[1] * t1.square() == RatFunc.zero()


def test_rank_matches_evaluation_oracle():
    rng = random.Random(2)

    def rnd(max_terms=3):
        terms = set()
        for _ in range(rng.randint(0, max_terms)):
            terms.add(tuple((v, rng.randint(1, 2)) for v in range(3)
                            if rng.random() < 0.5))
        return RatFunc(Poly2(frozenset(terms)))

    for _ in range(5):
        matrix = [[rnd() for _ in range(8)] for _ in range(6)]
        rank, kernel = rank_over_field(matrix)
        assert rank == evaluation_rank(matrix, samples=20, seed=rng.randrange(99))
        assert len(kernel) == 8 - rank
        for vec in kernel:
            for row in matrix:
                acc = RatFunc.zero()
                for entry, x in zip(row, vec):
                    acc = acc + entry * x
                assert acc == RatFunc.zero()


def test_matrix_csv_dump(F):
    ps = PreparedSystem(F, [F.one(), F.variable("t1")])
    csv = ps.matrix_csv()
    assert csv.splitlines()[0].startswith("row_key,")
    assert len(csv.splitlines()) == 1 + len(ps.key_index)
