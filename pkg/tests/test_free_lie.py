"""Lyndon machinery, CBH, and evaluation morphisms."""

from fractions import Fraction

import pytest

from assockv.free_lie import (
    LieElement,
    NotPrimitiveError,
    conj_exp_ad,
    eval_lie,
    expand_word,
    group_mul,
    is_lyndon,
    lyndon_words,
    oracle_spot_check,
    standard_factorization,
    universal_cbh,
    witt_dimension,
)
from assockv.series import NCSeries


def necklace_count(n: int, d: int) -> int:
    """Witt formula via an independent Moebius computation."""

    def mobius(m):
        if m == 1:
            return 1
        out, p, mm = 1, 2, m
        while p * p <= mm:
            if mm % p == 0:
                mm //= p
                if mm % p == 0:
                    return 0
                out = -out
            p += 1
        if mm > 1:
            out = -out
        return out

    total = 0
    for div in range(1, d + 1):
        if d % div == 0:
            total += mobius(div) * n ** (d // div)
    return total // d


def test_lyndon_basics():
    assert lyndon_words(2, 1) == ((1,), (2,))
    assert lyndon_words(2, 2) == ((1, 2),)
    assert len(lyndon_words(2, 5)) == 6
    assert all(is_lyndon(w) for d in range(1, 7) for w in lyndon_words(3, d))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witt_dimensions(n):
    for d in range(1, 9 if n == 2 else 6):
        assert witt_dimension(n, d) == necklace_count(n, d)


def test_standard_factorization_triangular():
    # expansion of a bracketed Lyndon word is the word plus lex-larger words
    for d in range(2, 7):
        for w in lyndon_words(2, d):
            exp = expand_word(w)
            assert exp[w] == 1
            assert all(v >= w for v in exp)
    u, v = standard_factorization((1, 1, 2, 1, 2))
    assert u == (1, 1, 2) and v == (1, 2)


def test_lie_to_assoc_and_back():
    xy = LieElement(2, 4, {(1, 2): 1})
    assert xy.to_ncseries() == NCSeries(2, 4, {(1, 2): 1, (2, 1): -1})
    with pytest.raises(NotPrimitiveError):
        LieElement.from_ncseries(NCSeries(2, 4, {(1, 2): 1}))


def test_roundtrip_random(rng):
    for _ in range(6):
        coords = {}
        for d in range(1, 6):
            words = lyndon_words(2, d)
            coords[rng.choice(words)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        u = LieElement(2, 5, coords)
        assert LieElement.from_ncseries(u.to_ncseries()) == u
        assert u.to_ncseries().is_primitive()
        assert u.to_ncseries().exp().is_grouplike()


def test_jacobi_random(rng):
    elems = []
    for _ in range(6):
        coords = {}
        for d in range(1, 4):
            coords[rng.choice(lyndon_words(3, d))] = Fraction(rng.randint(-3, 3))
        elems.append(LieElement(3, 5, coords))
    oracle_spot_check(elems, rng)


def dynkin_project(z: NCSeries) -> LieElement:
    """Independent oracle: the left-normed bracketing projection.

    On Lie elements of degree d the projection acts as multiplication by
    d, so dividing by the degree recovers the element.
    """
    acc = LieElement.zero(z.letters, z.cap)
    for w, c in z.terms.items():
        if not w:
            continue
        elt = LieElement.generator(z.letters, z.cap, w[-1])
        for letter in reversed(w[:-1]):
            elt = LieElement.generator(z.letters, z.cap, letter).bracket(elt)
        acc = acc + elt.scale(Fraction(c, len(w)))
    return acc


def test_universal_cbh_low_degrees():
    c = universal_cbh(2, 4)
    assert c.degree_part(1) == LieElement(2, 4, {(1,): 1, (2,): 1})
    assert c.degree_part(2) == LieElement(2, 4, {(1, 2): Fraction(1, 2)})
    # degree 3: (1/12)[x,[x,y]] + (1/12)[[x,y],y]
    assert c.degree_part(3) == LieElement(2, 4, {(1, 1, 2): Fraction(1, 12), (1, 2, 2): Fraction(1, 12)})


def test_universal_cbh_against_dynkin_oracle():
    cap = 5
    series = (NCSeries.letter(2, cap, 1).exp() * NCSeries.letter(2, cap, 2).exp()).log()
    assert dynkin_project(series) == universal_cbh(2, cap)


def test_group_law():
    cap = 6
    x = LieElement.generator(2, cap, 1)
    y = LieElement.generator(2, cap, 2)
    zero = LieElement.zero(2, cap)
    assert group_mul(x, zero) == x
    assert group_mul(x, -x).is_zero()
    assert eval_lie(universal_cbh(2, cap), (x, zero)) == x


def test_group_law_associativity(rng):
    cap = 5
    for _ in range(4):
        elts = []
        for _ in range(3):
            coords = {}
            for d in range(1, 4):
                coords[rng.choice(lyndon_words(2, d))] = Fraction(rng.randint(-3, 3), 2)
            elts.append(LieElement(2, cap, coords))
        a, b, c = elts
        assert group_mul(group_mul(a, b), c) == group_mul(a, group_mul(b, c))


def test_eval_lie_examples():
    cap = 4
    x = LieElement.generator(2, cap, 1)
    t = LieElement(2, cap, {(1, 2): 1})
    assert eval_lie(x, (t, t)) == t
    assert eval_lie(LieElement(2, cap, {(1, 2): 1}), (t, t)).is_zero()
    cbh = universal_cbh(2, cap)
    z = LieElement(2, cap, {(1,): 1, (1, 2): Fraction(2, 3)})
    assert eval_lie(cbh, (z, -z)).is_zero()


def test_eval_lie_rejects_valuation_zero():
    x = NCSeries.one(2, 4)
    with pytest.raises(ValueError):
        eval_lie(LieElement.generator(1, 4, 1), (x,))


def test_cbh_multi_arity():
    cap = 3
    c3 = universal_cbh(3, cap)
    x = LieElement.generator(2, cap, 1)
    y = LieElement.generator(2, cap, 2)
    zero = LieElement.zero(2, cap)
    # collapsing the middle slot gives the binary law
    assert eval_lie(c3, (x, zero, y)) == group_mul(x, y)


def test_conj_exp_ad():
    cap = 5
    x = LieElement.generator(2, cap, 1)
    y = LieElement.generator(2, cap, 2)
    lhs = conj_exp_ad(x, y).to_ncseries()
    ex = x.to_ncseries().exp()
    rhs = ex * y.to_ncseries() * (-x).to_ncseries().exp()
    assert lhs == rhs
