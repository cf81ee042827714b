import random

import pytest

from quasilin.basefield import (Poly2, RatFunc, frobenius_recompose,
                                frobenius_split, mono_to_str, poly_gcd,
                                poly_to_str, ratfunc_to_str)
from quasilin.errors import InvalidOperandError

from oracles import sympy_gcd_or_none

t1 = Poly2.variable(0)
t2 = Poly2.variable(1)
one = Poly2.one()
zero = Poly2.zero()


def rnd_poly(rng, n_vars=3, max_terms=4, max_deg=3, allow_zero=False):
    terms = set()
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        mono = tuple((v, rng.randint(1, max_deg)) for v in range(n_vars)
                     if rng.random() < 0.5)
        terms.add(mono)
    return Poly2(frozenset(terms))


# ---------------------------------------------------------------------------
# polynomial arithmetic
# ---------------------------------------------------------------------------

def test_addition_is_symmetric_difference():
    assert t1 + t1 == zero
    assert (t1 + t2) + t2 == t1
    assert one + zero == one


def test_freshmans_dream():
    rng = random.Random(1)
    for _ in range(100):
        a, b = rnd_poly(rng), rnd_poly(rng)
        assert (a + b).square() == a.square() + b.square()
        assert (a * b).square() == a.square() * b.square()


def test_exact_division_roundtrip():
    rng = random.Random(2)
    for _ in range(60):
        a, b = rnd_poly(rng), rnd_poly(rng)
        assert (a * b).exact_div(b) == a
    with pytest.raises(InvalidOperandError):
        (t1 + one).exact_div(t2)
    with pytest.raises(InvalidOperandError):
        t1.exact_div(zero)


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------

def test_gcd_examples():
    assert poly_gcd(t1.square() + t1, t1) == t1
    p = rnd_poly(random.Random(3))
    assert poly_gcd(p, zero) == p
    assert poly_gcd(zero, p) == p
    # t1^2 t2 + t2^3 = (t1 + t2)^2 t2 in characteristic 2
    big = t1.square() * t2 + t2 ** 3
    g = poly_gcd(big, t1 + t2)
    assert g == t1 + t2
    # exact-division oracle: the gcd divides both arguments
    assert g.divides(big) and g.divides(t1 + t2)
    assert big.exact_div(t1 + t2) == (t1 + t2) * t2


def test_gcd_divides_and_absorbs_common_factor():
    rng = random.Random(4)
    for _ in range(40):
        a, b, c = rnd_poly(rng), rnd_poly(rng), rnd_poly(rng)
        g = poly_gcd(a * c, b * c)
        assert g.divides(a * c) and g.divides(b * c)
        assert c.divides(g)
        # the scaled identity holds exactly over GF(2) (units are trivial)
        assert g == poly_gcd(a, b) * c


def test_gcd_matches_sympy_where_it_runs():
    rng = random.Random(5)
    agreed = 0
    for _ in range(60):
        a, b, c = rnd_poly(rng), rnd_poly(rng), rnd_poly(rng, max_terms=2)
        mine = poly_gcd(a * c, b * c)
        theirs = sympy_gcd_or_none(a * c, b * c)
        if theirs is not None:
            assert mine == theirs
            agreed += 1
    assert agreed >= 30  # sympy's GF(2) PRS is flaky, but not that flaky


def test_gcd_large_inputs_fast():
    # sizes in this range made pseudo-remainder sequences explode
    rng = random.Random(6)
    a = rnd_poly(rng, n_vars=3, max_terms=12, max_deg=5)
    b = rnd_poly(rng, n_vars=3, max_terms=10, max_deg=5)
    g = rnd_poly(rng, n_vars=3, max_terms=5, max_deg=3)
    out = poly_gcd(a * g, b * g)
    assert g.divides(out)
    assert out.divides(a * g) and out.divides(b * g)


# ---------------------------------------------------------------------------
# frobenius split
# ---------------------------------------------------------------------------

def test_split_basis_monomial():
    parts = frobenius_split(RatFunc(t1))
    assert set(parts) == {((0, 1),)}
    assert parts[((0, 1),)] == RatFunc.one()


def test_split_parity():
    parts = frobenius_split(RatFunc(t1.square() + t1))
    assert parts[()] == RatFunc(t1)
    assert parts[((0, 1),)] == RatFunc.one()


def test_split_roundtrip_with_denominator():
    x = RatFunc(one, t1 + t2.square())
    assert frobenius_recompose(frobenius_split(x)) == x
    rng = random.Random(7)
    for _ in range(40):
        num, den = rnd_poly(rng), rnd_poly(rng)
        x = RatFunc(num, den)
        assert frobenius_recompose(frobenius_split(x)) == x


def test_split_uniqueness_and_squareness():
    rng = random.Random(8)
    for _ in range(40):
        x = RatFunc(rnd_poly(rng), rnd_poly(rng))
        y = RatFunc(rnd_poly(rng), rnd_poly(rng))
        same_split = frobenius_split(x) == frobenius_split(y)
        assert same_split == (x == y)
        sq = x.square()
        parts = frobenius_split(sq)
        assert set(parts) <= {()}
        if sq:
            assert sq.is_square() and sq.sqrt() == x
    assert not RatFunc(t1).is_square()


def test_split_variable_containment_check():
    with pytest.raises(InvalidOperandError):
        frobenius_split(RatFunc(t2), variables=[0])


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

def test_ratfunc_char2_addition():
    a = RatFunc(t1, t1 + one)
    b = RatFunc(one, t1 + one)
    assert (a + b).is_one()


def test_ratfunc_invert():
    x = RatFunc(t1).square()
    assert ratfunc_to_str(x.invert()) == "(1)/(t0^2)"
    with pytest.raises(InvalidOperandError):
        RatFunc.zero().invert()
    with pytest.raises(InvalidOperandError):
        RatFunc(t1, zero)


def test_ratfunc_square_additivity():
    rng = random.Random(9)
    for _ in range(100):
        a = RatFunc(rnd_poly(rng), rnd_poly(rng))
        b = RatFunc(rnd_poly(rng), rnd_poly(rng))
        assert (a + b).square() == a.square() + b.square()


def test_ratfunc_field_axioms():
    rng = random.Random(10)
    for _ in range(40):
        a = RatFunc(rnd_poly(rng), rnd_poly(rng))
        b = RatFunc(rnd_poly(rng), rnd_poly(rng))
        c = RatFunc(rnd_poly(rng), rnd_poly(rng))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * a.invert() == RatFunc.one()


def test_normalize_idempotent_and_unique():
    rng = random.Random(11)
    for _ in range(40):
        a, b, c = rnd_poly(rng), rnd_poly(rng), rnd_poly(rng)
        x = RatFunc(a * c, b * c)
        n = x.normalize()
        assert n == x
        assert n.normalize().num == n.num and n.normalize().den == n.den
        # the reduced representative is unique
        assert n.num == RatFunc(a, b).normalize().num
        assert n.den == RatFunc(a, b).normalize().den


def test_equality_cross_multiplies_unreduced_pairs():
    x = RatFunc(t1 * (t1 + one), (t1 + one) * t2)
    y = RatFunc(t1, t2)
    assert x == y
    assert hash(x) == hash(y)


def test_printing_is_canonical():
    p = t1 * t2 + t1 + t2.square()
    assert poly_to_str(p) == "t0*t1 + t1^2 + t0"
    assert poly_to_str(p, names=("a", "b")) == "a*b + b^2 + a"
    assert mono_to_str(()) == "1"
    assert poly_to_str(zero) == "0"
