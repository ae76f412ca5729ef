"""Associator solver, relation checks, Gamma functions, torsor actions."""

from fractions import Fraction

import pytest

from assockv.associators import (
    Associator,
    GRTElement,
    GTElement,
    act_grt,
    act_gt,
    bernoulli_check,
    check_grt1,
    check_gt1,
    check_m1,
    derived_quotient_class,
    element_between,
    gamma_of_f,
    gamma_of_phi,
    grt_mul,
    gt_mul,
    hexagon_residual,
    solve_associator,
)
from assockv.free_lie import LieElement
from assockv.series import CommSeries


def test_solver_degree_two():
    phi = solve_associator(2)
    assert phi.log.coords == {(1, 2): Fraction(1, 24)}


def test_wrong_hexagon_coefficient_fails():
    # the hexagon pins the degree-2 coefficient uniquely
    bad = Associator(LieElement(2, 2, {(1, 2): Fraction(1, 12)}))
    from assockv.associators import embed_two_letters_t3

    res = hexagon_residual(embed_two_letters_t3(bad.log), +1)
    assert res.valuation() == 2
    good = Associator(LieElement(2, 2, {(1, 2): Fraction(1, 24)}))
    assert hexagon_residual(embed_two_letters_t3(good.log), +1).is_zero()


def test_even_flag(phi4):
    assert phi4.even
    assert all(len(w) % 2 == 0 for w in phi4.log.coords)
    with pytest.raises(ValueError):
        Associator(LieElement(2, 3, {(1, 1, 2): 1}), even=True)


def test_check_m1(phi4, phi5):
    for phi in (phi4, phi5):
        assert all(r.ok for r in check_m1(phi))


def test_trivial_associator_modulo_degree_two():
    one = Associator(LieElement.zero(2, 1))
    assert all(r.ok for r in check_m1(one, cross_check_pentagon=False))


def test_distinct_tiebreaks(phi5, phi5_ones):
    assert phi5.log != phi5_ones.log
    assert (phi5_ones.log - phi5.log).valuation() == 3
    assert all(r.ok for r in check_m1(phi5_ones))


def test_gamma_values(phi6):
    log_gamma, zetas = gamma_of_phi(phi6)
    assert zetas[0] == Fraction(-1, 24)
    assert zetas[1] == 0
    assert zetas[2] == Fraction(1, 1440)
    assert zetas[3] == 0
    assert zetas[4] == Fraction(-1, 60480)
    assert bernoulli_check(zetas, 6)
    assert log_gamma.coeff(2) == Fraction(-1, 48)
    # odd parts vanish for an even associator
    assert log_gamma.odd_part().is_zero()


def test_predicates_on_identity_elements():
    assert all(r.ok for r in check_gt1(GTElement.identity(4)))
    assert all(r.ok for r in check_grt1(GRTElement.identity(4)))


def test_torsor_unit_actions(phi4):
    assert act_gt(GTElement.identity(4), phi4).log == phi4.log
    assert act_grt(phi4, GRTElement.identity(4)).log == phi4.log


def test_element_between_roundtrips(phi5, phi5_ones, gt5, grt5):
    assert act_gt(gt5, phi5).log == phi5_ones.log
    assert act_grt(phi5, grt5).log == phi5_ones.log
    # trivial case
    assert element_between(phi5, phi5, "grt").log.is_zero()
    assert element_between(phi5, phi5, "gt").log.is_zero()


def test_between_elements_pass_predicates(gt5, grt5):
    assert all(r.ok for r in check_gt1(gt5))
    assert all(r.ok for r in check_grt1(grt5))


def test_action_axioms(phi5, phi5_ones, gt5, grt5):
    # double grt action equals the product action
    g2 = grt_mul(grt5, grt5)
    assert act_grt(act_grt(phi5, grt5), grt5).log == act_grt(phi5, g2).log
    f2 = gt_mul(gt5, gt5)
    assert act_gt(gt5, act_gt(gt5, phi5)).log == act_gt(f2, phi5).log
    # the two actions commute
    lhs = act_grt(act_gt(gt5, phi5), grt5)
    rhs = act_gt(gt5, act_grt(phi5, grt5))
    assert lhs.log == rhs.log


def test_solver_gauge_direction_is_grt(phi5, phi5_ones):
    # the tiebreak difference acts by a graded torsor element and stays in the set
    g = element_between(phi5, phi5_ones, "grt")
    assert g.log.valuation() == 3
    assert all(r.ok for r in check_grt1(g))


def test_derived_quotient_class():
    cap = 4
    a = LieElement.generator(2, cap, 1)
    b = LieElement.generator(2, cap, 2)
    assert derived_quotient_class(a.bracket(b)) == CommSeries(2, cap, {(1, 1): 1})
    assert derived_quotient_class(a.bracket(a.bracket(b))) == CommSeries(2, cap, {(2, 1): 1})
    # second derived elements have trivial class
    w = a.bracket(b).bracket(a.bracket(a.bracket(b)))
    assert derived_quotient_class(w.with_cap(6)) == CommSeries(2, 6)


def test_gamma_of_f(gt5, phi5, phi5_ones):
    lg_f = gamma_of_f(gt5)
    assert lg_f.even_part().is_zero()
    lg1, _ = gamma_of_phi(phi5, verify=False)
    lg2, _ = gamma_of_phi(phi5_ones, verify=False)
    assert lg2 == lg_f + lg1
    assert gamma_of_f(GTElement.identity(5)).is_zero()


def test_gamma_of_f_group_morphism(gt5):
    prod = gt_mul(gt5, gt5)
    assert gamma_of_f(prod) == gamma_of_f(gt5) + gamma_of_f(gt5)


def test_solver_speed_sanity():
    import time

    t0 = time.time()
    solve_associator(4, even=True)
    assert time.time() - t0 < 60
