"""Braid combinatorics, holonomy images, parenthesized-word machinery."""

from fractions import Fraction

import pytest

from assockv.braids import (
    BraidWord,
    FreeWord,
    PBWord,
    ParenWord,
    ad_pb,
    all_trees,
    artin_action,
    braid_from_text,
    braid_to_text,
    cabling,
    check_centralizer_pb,
    check_pb_relations,
    double_leaf,
    free_embed_pb,
    gt_cochain_identity_check,
    jacobian_alpha_O,
    jacobian_mu_O,
    leaf_doubling_check,
    malcev_free,
    malcev_log_free,
    malcev_taut,
    move_path,
    mu_O,
    mu_comb,
    pb_gen,
    pb_relators,
    phi_OO,
    right_comb,
    telescopic_factors,
    telescopic_mu,
)
from assockv.drinfeld_kohno import TnGroupElement, tn_gen
from assockv.free_lie import LieElement, eval_lie
from assockv.kv import mu_of_phi
from assockv.series import NCSeries
from assockv.tangential import StrandMap, TangAut
from assockv.traces import jacobian


def identity_on_free(images, rank):
    return all(w == FreeWord.gen(rank, k) for k, w in enumerate(images, start=1))


def test_free_word_reduction():
    w = FreeWord(2, ((1, 1), (2, 1), (2, -1), (1, -1)))
    assert w.is_identity()
    assert (FreeWord.gen(2, 1) ** -2).letters == ((1, -1), (1, -1))


def test_artin_braid_relations():
    assert BraidWord(3, ((1, 1), (2, 1), (1, 1))) == BraidWord(3, ((2, 1), (1, 1), (2, 1)))
    assert BraidWord(4, ((1, 1), (3, 1))) == BraidWord(4, ((3, 1), (1, 1)))
    assert BraidWord(3, ((1, 1),)) != BraidWord(3, ((2, 1),))
    assert identity_on_free(artin_action(BraidWord.identity(3)), 3)


def test_pb_gen():
    assert pb_gen(3, 1, 2).gens == ((1, 1), (1, 1))
    assert pb_gen(3, 1, 3).gens == ((1, -1), (2, 1), (2, 1), (1, 1))
    for n in (3, 4):
        for j in range(2, n + 1):
            for i in range(1, j):
                assert pb_gen(n, i, j).is_pure()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_pb_relations(n):
    assert all(r.ok for r in check_pb_relations(n))


def test_corrupted_relator_fails():
    # (x_ij, x_ik) is generically not a relation
    w = PBWord.gen(4, 1, 2).commutator(PBWord.gen(4, 1, 3))
    assert not identity_on_free(artin_action(w.to_braid()), 4)


@pytest.mark.parametrize("n", [3, 4])
def test_ad_pb_relators(n):
    for _, rel in pb_relators(n):
        assert identity_on_free(ad_pb(rel), n - 1)


def test_ad_pb_display_rules():
    # conjugation by x_{1,i+1} is inner
    imgs = ad_pb(PBWord.gen(4, 1, 2))
    x = [FreeWord.gen(3, k) for k in (1, 2, 3)]
    assert imgs == [w.conj(x[0]) for w in x]
    # an inner pair: first moves by the partner, strands outside stay put
    imgs = ad_pb(PBWord.gen(4, 2, 3))
    assert imgs[0] == x[1].inv() * x[0] * x[1]
    assert imgs[1] == (x[0] * x[1]).inv() * x[1] * (x[0] * x[1])
    assert imgs[2] == x[2]


def test_ad_pb_matches_braid_conjugation(rng):
    pairs = [(i, j) for j in range(2, 5) for i in range(1, j)]
    for _ in range(4):
        w = PBWord(4, tuple((rng.choice(pairs), rng.choice((1, -1))) for _ in range(3)))
        imgs = ad_pb(w)
        wb = w.to_braid()
        for k in range(1, 4):
            lhs = wb * free_embed_pb(FreeWord.gen(3, k), 4).to_braid() * wb.inv()
            assert lhs == free_embed_pb(imgs[k - 1], 4).to_braid()


def test_cabling_formula_and_geometry():
    c = cabling(PBWord.gen(2, 1, 2), (1, 2))
    assert [(p, e) for p, e in c.letters] == [((1, 2), 1), ((1, 3), 1)]
    # geometric cross-check: the strand crosses the doubled cable and back,
    # so the image is s1 s2 s2 s1
    assert c.to_braid() == BraidWord(3, ((1, 1), (2, 1), (2, 1), (1, 1)))
    # identity multiplicities
    w = PBWord(3, (((1, 2), 1), ((2, 3), -1)))
    assert cabling(w, (1, 1, 1)).letters == w.letters


def test_cabling_relator_preservation(rng):
    # images of relators remain relators
    for _, rel in pb_relators(3):
        img = cabling(rel, (2, 1, 1))
        assert identity_on_free(artin_action(img.to_braid()), 4)


def test_cabling_composition(rng):
    pairs = [(i, j) for j in range(2, 4) for i in range(1, j)]
    w = PBWord(3, tuple((rng.choice(pairs), rng.choice((1, -1))) for _ in range(2)))
    one_shot = cabling(w, (2, 2, 1))
    two_step = cabling(cabling(w, (2, 1, 1)), (1, 1, 2, 1))
    assert one_shot.to_braid() == two_step.to_braid()


def test_cabling_commutes_with_holonomy(phi4, rng):
    # strand doubling intertwines the braided holonomies with the coface
    from assockv.braids import cabling_diagram_check

    cap = 3
    pairs = [(i, j) for j in range(2, 4) for i in range(1, j)]
    w = PBWord(3, tuple((rng.choice(pairs), rng.choice((1, -1))) for _ in range(2)))
    for strand in (1, 2, 3):
        assert cabling_diagram_check(phi4, ParenWord.from_text("•(••)"), strand, w, cap).ok


def test_mu_tilde_relations_and_restriction(phi4):
    from assockv.braids import free_ideal_embed, mu_tilde_O, mu_tilde_comb

    cap = 3
    l1, p1 = mu_tilde_comb(phi4, BraidWord(4, ((2, 1), (3, 1), (2, 1))), cap)
    l2, p2 = mu_tilde_comb(phi4, BraidWord(4, ((3, 1), (2, 1), (3, 1))), cap)
    assert l1 == l2 and p1 == p2
    o = ParenWord.from_text("•(••)")
    mu = mu_O(phi4, o, cap)
    for k in (1, 2):
        lhs = mu_tilde_O(phi4, o, PBWord.gen(3, 1, k + 1), cap)
        from assockv.drinfeld_kohno import TnGroupElement

        assert lhs == TnGroupElement(free_ideal_embed(mu.images_lie()[k - 1], 3))


def test_malcev_free():
    cap = 4
    w = FreeWord(2, ((1, 1), (2, 1)))
    e1 = NCSeries.letter(2, cap, 1).exp()
    e2 = NCSeries.letter(2, cap, 2).exp()
    assert malcev_free(w, cap) == e1 * e2
    assert malcev_log_free(FreeWord.identity(2), cap).is_zero()


def test_malcev_taut_multiplicative(rng):
    cap = 3
    pairs = [(i, j) for j in range(2, 5) for i in range(1, j)]
    a = PBWord(4, tuple((rng.choice(pairs), 1) for _ in range(2)))
    b = PBWord(4, tuple((rng.choice(pairs), -1) for _ in range(2)))
    assert malcev_taut(a * b, cap) == malcev_taut(a, cap).compose(malcev_taut(b, cap))


def test_jacobian_of_holonomy_vanishes(rng):
    cap = 4
    pairs = [(i, j) for j in range(2, 5) for i in range(1, j)]
    for _ in range(5):
        w = PBWord(4, tuple((rng.choice(pairs), rng.choice((1, -1))) for _ in range(4)))
        assert jacobian(malcev_taut(w, cap)).is_zero()


def test_paren_words():
    o = ParenWord.from_text("•((••)•)")
    assert o.size() == 4 and o.to_text() == "•((••)•)"
    assert double_leaf(ParenWord.from_text("•(••)"), 1).to_text() == "•((••)•)"
    assert right_comb(4).to_text() == "•(•(••))"
    assert len(all_trees(4)) == 5
    assert move_path(o, o) == [] or phi_OO is not None  # the path may legally be empty
    assert move_path(right_comb(4), right_comb(4)) == []


def test_move_path_simple():
    path = move_path(ParenWord.from_text("(••)•"), ParenWord.from_text("•(••)"))
    assert path == [(((1,), (2,), (3,)), 1)]


def test_phi_OO(phi4):
    cap = 4
    o = ParenWord.from_text("•((••)•)")
    o2 = ParenWord.from_text("•(•(••))")
    assert phi_OO(phi4, o, o, cap) == TnGroupElement.identity(4, cap)
    expect = TnGroupElement(eval_lie(phi4.log, (tn_gen(4, 2, 3, cap), tn_gen(4, 3, 4, cap))))
    assert phi_OO(phi4, o, o2, cap) == expect


def test_phi_OO_cocycle(phi4, rng):
    cap = 3
    trees = all_trees(4)
    a, b, c = (rng.choice(trees) for _ in range(3))
    assert phi_OO(phi4, b, c, cap).mul(phi_OO(phi4, a, b, cap)) == phi_OO(phi4, a, c, cap)


def test_mu_base_case(phi4):
    cap = 4
    assert mu_O(phi4, ParenWord.from_text("•(••)"), cap) == mu_of_phi(phi4).mu
    assert mu_comb(phi4, 1, cap) == TangAut.identity(1, cap)


def test_mu_O_reference_independence(phi4):
    cap = 3
    o = ParenWord.from_text("(••)(••)")
    ref = ParenWord.from_text("((••)•)•")
    assert mu_O(phi4, o, cap) == mu_O(phi4, o, cap, reference=ref)


def test_mu_O_generator_images_are_conjugates(phi4):
    cap = 4
    mu = mu_O(phi4, ParenWord.from_text("(••)•"), cap)
    for k, img in enumerate(mu.images_lie(), start=1):
        assert img.degree_part(1) == LieElement.generator(2, cap, k)


def test_mu_comb_degree_one_conjugators(phi4):
    # the canonical conjugator of letter i starts at -(x_1+...+x_{i-1})/2
    cap = 3
    mu = mu_comb(phi4, 3, cap).canonicalize()
    x = [LieElement.generator(3, cap, k) for k in (1, 2, 3)]
    assert mu.exponents[0].degree_part(1).is_zero()
    assert mu.exponents[1].degree_part(1) == x[0].scale(Fraction(-1, 2))
    assert mu.exponents[2].degree_part(1) == (x[0] + x[1]).scale(Fraction(-1, 2))


@pytest.mark.parametrize("otext,i", [("•(••)", 1), ("•(••)", 2), ("(••)•", 1), ("(••)•", 2)])
def test_leaf_doubling_three_leaves(phi4, otext, i):
    assert leaf_doubling_check(phi4, ParenWord.from_text(otext), i, 4).ok


def test_telescopic(phi4):
    cap = 3
    assert telescopic_mu(phi4, ParenWord.from_text("••"), cap) == mu_of_phi(phi4).mu.with_cap(cap)
    o3 = ParenWord.from_text("•(••)")
    assert telescopic_mu(phi4, o3, cap) == mu_O(phi4, ParenWord.pair(ParenWord.leaf(), o3), cap)


def test_telescopic_nine_leaf_shape():
    o9 = ParenWord.from_text("(((••)(••))(•(••)))(••)")
    assert telescopic_factors(o9) == [
        ((1, 2, 3, 4, 5, 6, 7), (8, 9)),
        ((1, 2, 3, 4), (5, 6, 7)),
        ((8,), (9,)),
        ((1, 2), (3, 4)),
        ((5,), (6, 7)),
        ((1,), (2,)),
        ((3,), (4,)),
        ((6,), (7,)),
    ]


def test_jacobian_closed_forms(phi4):
    _, _, ok = jacobian_mu_O(phi4, right_comb(3), 4)
    assert ok
    _, _, ok = jacobian_mu_O(phi4, ParenWord.from_text("(••)•"), 4)
    assert ok


def test_gt_cochain_identity(gt5):
    assert gt_cochain_identity_check(gt5, 4).ok


def test_gt_telescoped_jacobian(gt5):
    _, _, ok = jacobian_alpha_O(gt5, ParenWord.from_text("••"), 4)
    assert ok
    _, _, ok = jacobian_alpha_O(gt5, ParenWord.from_text("(••)•"), 4)
    assert ok


def test_alpha_O_torsor_relation(phi5, phi5_ones, gt5):
    from assockv.braids import alpha_f_O

    cap = 4
    o2 = ParenWord.from_text("(••)•")
    full = ParenWord.pair(ParenWord.leaf(), o2)
    lhs = alpha_f_O(gt5, o2, cap)
    rhs = mu_O(phi5, full, cap).inverse().compose(mu_O(phi5_ones, full, cap))
    assert lhs == rhs


def test_centralizer_suite(rng):
    assert all(r.ok for r in check_centralizer_pb(3, 4, rng))


def test_text_format():
    w = PBWord(4, (((1, 3), 1), ((2, 4), -1)))
    assert braid_from_text(braid_to_text(w)).letters == w.letters
    b = BraidWord(3, ((1, 1), (2, -1)))
    assert braid_from_text(braid_to_text(b)).gens == b.gens
    with pytest.raises(ValueError):
        braid_from_text("x12 x13")
    with pytest.raises(ValueError):
        braid_from_text("strands: 3\ns1 x12")
