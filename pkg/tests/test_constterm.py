"""Residue operators and constant-term extraction on ME elements."""

from fractions import Fraction as F

import pytest

from chi10.constterm import (
    MEElement,
    anomaly_residue_check,
    const_term_avg_fourier,
    const_term_avg_residue,
    const_term_multi,
    const_term_sigma_fourier,
    const_term_sigma_residue,
    const_term_single,
    me_residue,
    w_laurent_row,
)
from chi10.errors import SeriesError
from chi10.qmod import QModPolynomial, qmod_evaluate


def wp(labels, i, j, k=0):
    return MEElement.wp_factor(labels, i, j, k)


def test_weight_grading():
    F3 = wp({1, 2, 3}, 1, 2, 1) * wp({1, 2, 3}, 2, 3, 0)
    assert F3.weight() == 3 + 2
    assert MEElement.from_qmod({1, 2}, QModPolynomial.generator(6)).weight() == 6


def test_residue_of_balanced_combination_vanishes():
    bal = MEElement.wp_factor({1, 2}, 1, 2, 0, plus_2c2=True)
    assert me_residue(bal, 1, 2).is_zero()


def test_residue_two_wp_factors():
    G = wp({1, 2, 3}, 1, 2) * wp({1, 2, 3}, 1, 3)
    r = me_residue(G, 1, 2)
    assert r.terms == {((0, 0, 0), ((2, 3, 1),), 0): F(1)}
    # weight drops by one
    assert r.weight() == G.weight() - 1


def test_residue_orientation_matters():
    G = wp({1, 2, 3}, 1, 2) * wp({1, 2, 3}, 1, 3)
    r12 = me_residue(G, 1, 2)
    # R_21 integrates out z_2, but the cofactor wp(z_1 - z_3) does not
    # depend on z_2, so only the even pole remains and the residue vanishes
    r21 = me_residue(G, 2, 1)
    assert r12.terms == {((0, 0, 0), ((2, 3, 1),), 0): F(1)}
    assert r21.is_zero()


def test_omega_residue_constant():
    r = me_residue(wp({1, 2}, 1, 2), 1, 2, times_omega=True)
    assert r.terms == {((0, 0, 0), (), 0): F(1)}


def test_const_term_single_wp():
    poly, four, dd = const_term_single(wp({1, 2}, 1, 2), 10)
    assert poly == QModPolynomial.generator(2) * (-2)
    assert dd == QModPolynomial.const(-2)


def test_const_term_single_no_z_dependence():
    c4 = MEElement.from_qmod({1, 2}, QModPolynomial.generator(4))
    poly, _, dd = const_term_single(c4, 8)
    assert poly == QModPolynomial.generator(4)
    assert dd.is_zero()


def test_const_term_single_odd_vanishes():
    poly, four, _ = const_term_single(wp({1, 2}, 1, 2, 1), 8)
    assert poly.is_zero() and four.is_zero()


def test_w_laurent_row():
    e = wp({1, 2}, 1, 2)
    assert w_laurent_row(e, -2) == QModPolynomial.const(1)
    assert w_laurent_row(e, 0).is_zero()
    assert w_laurent_row(e, 2) == QModPolynomial.generator(4) * 12
    sq = e * e
    assert w_laurent_row(sq, -4) == QModPolynomial.const(1)
    assert w_laurent_row(sq, 0) == QModPolynomial.generator(4) * 24


def test_avg_three_variables_chain():
    G = wp({1, 2, 3}, 1, 2) * wp({1, 2, 3}, 2, 3)
    four, poly = const_term_multi(G, "averaged", 10)
    # golden, frozen after the first dual-route computation
    assert poly == QModPolynomial({(2, 0, 0): 4}, 4)


def test_sigma_slices_and_average():
    G = wp({1, 2, 3}, 1, 2) * wp({1, 2, 3}, 2, 3)
    total = QModPolynomial.zero()
    from itertools import permutations

    for p in permutations((1, 2, 3)):
        sigma = {x: r for r, x in enumerate(p)}
        four, poly = const_term_multi(G, "sigma", 9, sigma=sigma)
        # fixed-sigma slices are quasimodular of weight <= 4
        assert poly.max_weight() <= 4
        total = total + poly
    assert (total * F(1, 6)) == QModPolynomial({(2, 0, 0): 4}, 4)


def test_anomaly_wp_sanity():
    lhs, rhs = anomaly_residue_check(wp({1, 2}, 1, 2), 8)
    assert lhs == QModPolynomial.const(-2)


def test_anomaly_scales_linearly():
    f = wp({1, 2}, 1, 2) * MEElement.from_qmod({1, 2}, QModPolynomial.generator(4))
    lhs, rhs = anomaly_residue_check(f, 8)
    assert lhs == QModPolynomial.generator(4) * (-2)


def test_anomaly_no_z_dependence():
    f = MEElement.from_qmod({1, 2}, QModPolynomial.generator(2) * 5)
    lhs, rhs = anomaly_residue_check(f, 8)
    assert lhs == QModPolynomial.const(5)


def test_fourier_route_matches_residue_on_triple_product():
    G = wp({1, 2, 3}, 1, 2) * wp({1, 2, 3}, 1, 3) * wp({1, 2, 3}, 2, 3)
    four, poly = const_term_multi(G, "averaged", 9)
    assert poly.evaluate(9).same_terms(four)
    assert {2 * a + 4 * b + 6 * c for (a, b, c) in poly.terms} == {6}


def test_quasi_periodicity_of_afun():
    """Row-level shadow of the shift law A(z + tau) = A(z) - 1.

    The shift p -> pq multiplies the p^m row a_m(q) by q^m; together with
    the law this forces (q^m - 1) a_m = 1 for every m != 0, i.e. the closed
    rows a_m = -1/(1 - q^m) (m > 0) and a_{-u} = q^u/(1 - q^u) (u > 0).
    (Comparing the shifted series coefficientwise is not meaningful: the
    substitution changes the expansion region, and the discrepancy is the
    formal resummation sum_m p^m = -1 that produces the -1 of the law.)
    """
    from chi10.elliptic import afun_fourier
    from chi10.series import TruncatedSeries

    qprec = 8
    a = afun_fourier(qprec, pmax=6)
    assert a.extract("p", 0).terms == {(0,): F(-1, 2)}
    for m in range(1, 7):
        row = a.extract("p", m)
        shifted = row.shift("q", m).truncate("q", qprec)
        lhs = shifted - row
        assert lhs.terms == {(0,): F(1)}, m
    for u in range(1, qprec - 1):
        row = a.extract("p", -u)
        grower = TruncatedSeries(("q",), {(0,): 1, (u,): -1}, (qprec,), (0,))
        assert (grower * row).terms == {(u,): F(1)}, u
