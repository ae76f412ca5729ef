"""Noncommutative series: ring axioms, exp/log, morphisms, Hopf structure."""

import random
from fractions import Fraction

import pytest

from assockv.series import (
    CommSeries,
    NCSeries,
    OneVarSeries,
    even_zeta_generating,
    u_over_expm1,
)


def brute_product(a: dict, b: dict, cap: int) -> dict:
    """Independent dense word-by-word multiplication used as the oracle."""
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            if len(w1) + len(w2) <= cap:
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
    return {w: c for w, c in out.items() if c}


def random_sparse(letters, cap, rng, terms=4):
    data = {}
    for _ in range(terms):
        d = rng.randint(0, cap)
        w = tuple(rng.randint(1, letters) for _ in range(d))
        data[w] = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    return NCSeries(letters, cap, data)


def test_unit_law():
    x = NCSeries.letter(2, 4, 1)
    assert x * NCSeries.one(2, 4) == x


def test_square_expansion():
    x = NCSeries.letter(2, 4, 1)
    y = NCSeries.letter(2, 4, 2)
    sq = (x + y) * (x + y)
    assert sq == NCSeries(2, 4, {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1})


def test_truncation_drops_long_words():
    x = NCSeries.letter(2, 1, 1)
    y = NCSeries.letter(2, 1, 2)
    assert (x * y).is_zero()


def test_mixed_caps_take_min():
    a = NCSeries.letter(2, 5, 1)
    b = NCSeries.letter(2, 3, 2)
    assert (a + b).cap == 3
    assert (a * b).cap == 3


def test_ring_axioms_on_random_sparse(rng):
    for _ in range(8):
        a = random_sparse(2, 6, rng)
        b = random_sparse(2, 6, rng)
        c = random_sparse(2, 6, rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert dict(((a * b).terms)) == brute_product(a.terms, b.terms, 6)


def test_exp_examples():
    two = NCSeries.zero(2, 2)
    assert two.exp() == NCSeries.one(2, 2)
    x = NCSeries.letter(2, 2, 1)
    assert x.exp() == NCSeries(2, 2, {(): 1, (1,): 1, (1, 1): Fraction(1, 2)})
    xy = (NCSeries.letter(2, 3, 1) + NCSeries.letter(2, 3, 2)).exp()
    assert xy.coeff((1, 2)) == Fraction(1, 2)


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        NCSeries.one(2, 3).exp()


def test_log_examples():
    assert NCSeries.one(2, 3).log().is_zero()
    x = NCSeries.letter(2, 5, 1)
    assert x.exp().log() == x
    with pytest.raises(ValueError):
        NCSeries.letter(2, 3, 1).log()


def test_log_of_product_degree_two():
    # independent brute-force expansion of log(e^x e^y) through degree 2
    cap = 2
    ex = {(): Fraction(1), (1,): Fraction(1), (1, 1): Fraction(1, 2)}
    ey = {(): Fraction(1), (2,): Fraction(1), (2, 2): Fraction(1, 2)}
    prod = brute_product(ex, ey, cap)
    u = {w: c for w, c in prod.items() if w}
    log2 = dict(u)
    for w, c in brute_product(u, u, cap).items():
        log2[w] = log2.get(w, 0) - c / 2
    expect = {w: c for w, c in log2.items() if c}
    g = NCSeries.letter(2, cap, 1).exp() * NCSeries.letter(2, cap, 2).exp()
    assert dict(g.log().terms) == expect
    assert g.log().coeff((1, 2)) == Fraction(1, 2)
    assert g.log().coeff((2, 1)) == Fraction(-1, 2)


def test_exp_log_inverse_on_random(rng):
    for _ in range(5):
        z = random_sparse(2, 5, rng)
        z = z - NCSeries(2, 5, {(): z.constant_term()})
        assert z.exp().log() == z


def test_substitute_identity_and_zero():
    f = NCSeries(2, 4, {(1, 2): 3, (2,): Fraction(1, 2)})
    x = NCSeries.letter(2, 4, 1)
    y = NCSeries.letter(2, 4, 2)
    assert f.substitute([x, y]) == f
    assert x.substitute([NCSeries.zero(2, 4), y]).is_zero()


def test_substitute_cbh_inverse():
    g = NCSeries.letter(2, 5, 1).exp() * NCSeries.letter(2, 5, 2).exp()
    z = g.log()
    x = NCSeries.letter(2, 5, 1)
    assert z.substitute([x, -x]).is_zero()


def test_substitute_rejects_constant_terms():
    f = NCSeries.letter(2, 4, 1)
    with pytest.raises(ValueError):
        f.substitute([NCSeries.one(2, 4), NCSeries.letter(2, 4, 2)])


def test_abelianize():
    x = NCSeries.letter(2, 4, 1)
    y = NCSeries.letter(2, 4, 2)
    assert (x * y - y * x).abelianize() == CommSeries(2, 4)
    assert x.abelianize() == CommSeries(2, 4, {(1, 0): 1})
    # e^x e^y abelianizes to e^{x+y}
    lhs = (x.exp() * y.exp()).abelianize()
    rhs = (x + y).abelianize().exp()
    assert lhs == rhs


def test_abelianize_is_algebra_morphism(rng):
    for _ in range(5):
        a = random_sparse(2, 5, rng)
        b = random_sparse(2, 5, rng)
        assert (a * b).abelianize() == a.abelianize() * b.abelianize()


def test_grouplike():
    x = NCSeries.letter(2, 4, 1)
    y = NCSeries.letter(2, 4, 2)
    z = x + x * y - y * x
    assert z.exp().is_grouplike()
    assert not NCSeries(2, 4, {(): 1, (1,): 1, (1, 2): 1}).is_grouplike()
    g = x.exp() * y.exp()
    assert g.is_grouplike()


def test_grouplike_iff_primitive_log(rng):
    from assockv.free_lie import LieElement

    coords = {(1,): 1, (1, 2): Fraction(1, 3), (1, 1, 2): -2}
    z = LieElement(2, 4, coords).to_ncseries()
    assert z.is_primitive()
    assert z.exp().is_grouplike()
    w = z + NCSeries(2, 4, {(1, 2): Fraction(1, 5)})
    assert not w.is_primitive()
    assert not w.exp().is_grouplike()


def test_one_var_series():
    b = u_over_expm1(6)
    assert b.coeff(0) == 1
    assert b.coeff(1) == Fraction(-1, 2)
    assert b.coeff(2) == Fraction(1, 12)
    assert b.coeff(4) == Fraction(-1, 720)
    gen = even_zeta_generating(6)
    assert gen.coeff(2) == Fraction(-1, 24)
    assert gen.coeff(4) == Fraction(1, 1440)
    assert gen.coeff(6) == Fraction(-1, 60480)
    r = OneVarSeries(6, {2: 1, 3: Fraction(1, 2)})
    assert r.derivative().times_u() == OneVarSeries(6, {2: 2, 3: Fraction(3, 2)})
