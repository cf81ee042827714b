import random

import pytest

from quasilin.basefield import Poly2, RatFunc
from quasilin.errors import (FieldMismatchError, InvalidOperandError,
                             NameCollisionError, SquareRadicandError)
from quasilin.qform import QForm
from quasilin.tower import FieldTower, element_to_str, tower_to_script


@pytest.fixture
def F():
    return FieldTower.rational("t1", "t2")


def rnd_element(tower, rng, max_terms=2, max_deg=2, density=0.6):
    coords = {}
    for m in range(1 << tower.n_roots):
        if rng.random() < density:
            terms = set()
            for _ in range(rng.randint(1, max_terms)):
                mono = tuple((v, rng.randint(1, max_deg))
                             for v in range(tower.n_vars)
                             if rng.random() < 0.5)
                terms.add(mono)
            p = Poly2(frozenset(terms))
            if p:
                coords[m] = RatFunc(p)
    return tower.element(coords)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_adjoin_sqrt_basic(F):
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1)
    assert Fr.degree_over_rational() == 2
    r1 = Fr.root(0)
    assert r1.square() == Fr.embed(t1)


def test_adjoin_two_stages_independent(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    Fr = F.adjoin_sqrt(t1)
    u2 = Fr.embed(t2) + Fr.root(0)
    # squareness oracle at each stage gates the construction
    assert not u2.is_square()
    F2 = Fr.adjoin_sqrt(u2)
    assert F2.degree_over_rational() == 4
    assert F2.root(1).square() == F2.embed(u2)
    # the four root products are independent: a random combination with a
    # nonzero coordinate is nonzero
    rng = random.Random(0)
    for _ in range(20):
        x = rnd_element(F2, rng)
        assert x.is_zero() == (not x.coords)


def test_adjoin_square_radicand_rejected(F):
    t1 = F.variable("t1")
    with pytest.raises(SquareRadicandError):
        F.adjoin_sqrt(t1.square())
    with pytest.raises(InvalidOperandError):
        F.adjoin_sqrt(F.zero())


def test_adjoin_transcendentals(F):
    G = F.adjoin_transcendentals(("X1", "X2"))
    assert G.var_names == ("t1", "t2", "X1", "X2")
    assert G.adjoin_transcendentals(()) is G
    with pytest.raises(NameCollisionError):
        G.adjoin_transcendentals(("t1",))
    with pytest.raises(NameCollisionError):
        FieldTower.rational("a", "a")


def test_transcendental_extension_preserves_anisotropy(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    q = QForm(F, [F.one(), t1, t2, t1 * t2])
    assert q.isotropy_index() == 0
    G = F.adjoin_transcendentals(("Y1", "Y2"))
    assert q.embed_into(G).isotropy_index() == 0


def test_transcendental_extension_preserves_squareness(F):
    rng = random.Random(1)
    Fr = F.adjoin_sqrt(F.variable("t1"))
    G = Fr.adjoin_transcendentals(("Z1",))
    for _ in range(10):
        x = rnd_element(Fr, rng)
        assert x.is_square() == G.embed(x).is_square()


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def test_char2_square_identity(F):
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1)
    e = Fr.one() + Fr.root(0)
    assert e * e == Fr.one() + Fr.embed(t1)
    assert e.square() == e * e


def test_invert_small_example(F):
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1)
    e = Fr.one() + Fr.root(0)
    inv = e.invert()
    # (1 + r1)^-1 = (1 + r1)/(1 + t1)
    norm = (Fr.one() + Fr.embed(t1)).invert()
    assert inv == e * norm
    assert (inv * e).is_one()


def test_invert_random_elements(F):
    # 200 random nonzero x with invert(x) * x = 1, across two towers
    rng = random.Random(2)
    Fr = F.adjoin_sqrt(F.variable("t1"))
    F2 = Fr.adjoin_sqrt(Fr.embed(F.variable("t2")) + Fr.root(0))
    done = 0
    for tower in (Fr, F2):
        while done < 100 * (1 + (tower is F2)):
            x = rnd_element(tower, rng)
            if x.is_zero():
                continue
            assert (x.invert() * x).is_one()
            done += 1


def test_mul_commutes_and_associates(F):
    rng = random.Random(3)
    Fr = F.adjoin_sqrt(F.variable("t1") * F.variable("t2"))
    for _ in range(15):
        x, y, z = (rnd_element(Fr, rng) for _ in range(3))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_squaring_drops_top_root(F):
    rng = random.Random(4)
    Fr = F.adjoin_sqrt(F.variable("t1"))
    F2 = Fr.adjoin_sqrt(Fr.embed(F.variable("t2")) + Fr.root(0))
    for _ in range(10):
        x = rnd_element(F2, rng)
        sq = x.square()
        assert all(m < 2 for m in sq.coords)
        assert sq == x * x


def test_pow(F):
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1)
    e = Fr.one() + Fr.root(0)
    assert e ** 0 == Fr.one()
    assert e ** 3 == e * e * e
    assert e ** -2 == (e * e).invert()


# ---------------------------------------------------------------------------
# squareness
# ---------------------------------------------------------------------------

def test_is_square_examples(F):
    t1, t2 = F.variable("t1"), F.variable("t2")
    x = (t1 + t2).square()
    assert x.is_square() and x.sqrt() == t1 + t2
    assert not t1.is_square()
    Fr = F.adjoin_sqrt(t1)
    assert Fr.embed(t1).is_square()
    assert Fr.embed(t1).sqrt() == Fr.root(0)
    with pytest.raises(InvalidOperandError):
        t1.sqrt()


def test_sqrt_witness_squares_back(F):
    rng = random.Random(5)
    Fr = F.adjoin_sqrt(F.variable("t1"))
    for _ in range(15):
        x = rnd_element(Fr, rng)
        sq = x.square()
        root = sq.sqrt()
        assert root.square() == sq


# ---------------------------------------------------------------------------
# embeddings and identity
# ---------------------------------------------------------------------------

def test_cross_tower_arithmetic_rejected(F):
    G = FieldTower.rational("t1", "t2", "t3")
    with pytest.raises(FieldMismatchError):
        F.variable("t1") + G.variable("t1")


def test_embed_requires_prefix(F):
    G = FieldTower.rational("u1")
    with pytest.raises(FieldMismatchError):
        F.embed(G.variable("u1"))
    H = F.adjoin_transcendentals(("X",))
    x = H.embed(F.variable("t1"))
    assert x == H.variable("t1")


def test_tower_script_roundtrip(F):
    from quasilin.cli import SessionRunner, parse
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1, root_name="r1")
    G = Fr.adjoin_transcendentals(("X1",))
    u = G.variable("X1") + G.embed(Fr.root(0))
    H = G.adjoin_sqrt(u, root_name="r2")
    script = tower_to_script(H)
    runner = SessionRunner()
    runner.run(parse(script))
    assert runner.tower == H
    assert tower_to_script(runner.tower) == script


def test_element_printing(F):
    t1 = F.variable("t1")
    Fr = F.adjoin_sqrt(t1)
    e = Fr.one() + (Fr.embed(t1) + Fr.one()) * Fr.root(0)
    assert element_to_str(e) == "1 + (t1 + 1)*r1"
    assert element_to_str(Fr.zero()) == "0"
