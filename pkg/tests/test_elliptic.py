"""Theta, Weierstrass and A: both presentations and their consistency."""

from fractions import Fraction as F

import pytest

from chi10 import elliptic as el
from chi10.constterm import MEElement, const_term_avg_residue
from chi10.qmod import QModPolynomial, qmod_evaluate


def test_wp_taylor_rows():
    wp = el.wp_w(0, 6)
    assert wp.coeff(-2) == QModPolynomial.const(1)
    assert wp.coeff(0).is_zero()
    assert wp.coeff(2) == QModPolynomial.generator(4) * 12
    assert wp.coeff(4) == QModPolynomial.generator(6) * 30


def test_wp_derivative_pole():
    assert el.wp_w(1, 4).coeff(-3) == QModPolynomial.const(-2)
    assert el.wp_w(2, 4).coeff(-4) == QModPolynomial.const(6)


def test_theta_taylor():
    th = el.theta_u(7)
    c2 = QModPolynomial.generator(2)
    c4 = QModPolynomial.generator(4)
    assert th.coeff(1) == QModPolynomial.const(1)
    assert th.coeff(3) == c2
    assert th.coeff(5) == c2 * c2 * F(1, 2) - c4
    assert th.parity() == -1


def test_theta_ddc2_is_u2_theta():
    th = el.theta_u(9)
    lhs = th.ddc2()
    rhs = th.shift(2)
    for e in range(1, 8):
        assert lhs.coeff(e) == rhs.coeff(e)


def test_afun_rows():
    a = el.afun_w(5)
    assert a.coeff(-1) == QModPolynomial.const(1)
    assert a.coeff(1) == QModPolynomial.generator(2) * (-2)
    assert a.coeff(3) == QModPolynomial.generator(4) * (-4)
    assert a.parity() == -1


def test_da_equals_minus_wp_minus_2c2():
    da = el.afun_w(8).derive()
    rhs = -(el.wp_plus_2c2_w(7))
    for e in range(-2, 6):
        assert da.coeff(e) == rhs.coeff(e)


def test_wp_fourier_p0_row():
    wp = el.wp_fourier(0, 5)
    # p^0 row: 1/12 - 2 sum sigma_1(n) q^n
    assert [wp.coeff((0, n)) for n in range(5)] == [F(1, 12), -2, -6, -8, -14]


def test_fourier_constant_term_is_minus_2c2():
    """[wp]_{p^0} computed two ways: Fourier row vs the residue formula."""
    wp = el.wp_fourier(0, 8)
    row = {n: wp.coeff((0, n)) for n in range(8)}
    sym = const_term_avg_residue(MEElement.wp_factor({1, 2}, 1, 2, 0))
    assert sym == QModPolynomial.generator(2) * (-2)
    ev = qmod_evaluate(sym, 8)
    assert all(ev.coeff((n,)) == row[n] for n in range(8))


def test_weight_bookkeeping():
    # the w^j coefficient of wp^(k) has weight j + k + 2
    for k in (0, 1, 2, 3):
        lq = el.wp_w(k, 7)
        for e, poly in lq.items_sorted():
            w = {2 * a + 4 * b + 6 * c for (a, b, c) in poly.terms}
            assert w <= {e + k + 2}


def test_theta_fourier_leading_row():
    tf = el.theta_fourier(4)
    q0 = tf.extract("q", 0)
    assert q0.terms == {(1,): F(1), (-1,): F(-1)}


def test_theta_product_squares_to_minus_taylor_square():
    """(product form)^2 = -(u-Taylor form)^2 as q-series coefficient rows.

    The u-Taylor square is an even series in u; converting its rows to the
    Fourier side uses p = e^(iu), so we compare the q^1-row constants: the
    product form gives p-rows whose p^0 entries match the evaluated
    -(Theta_u^2) rows at u^0 only through the full expansion; here we check
    the algebraic square via phi_{-2,1} instead (see test_jacobi).
    """
    tf = el.theta_fourier(5)
    sq = (tf * tf).collapse_power("p", 2)
    assert sq.extract("q", 0).terms == {(1,): F(1), (0,): F(-2), (-1,): F(1)}


def test_wp_u_form():
    wpu = el.wp_u(0, 6)
    assert wpu.coeff(-2) == QModPolynomial.const(-1)
    assert wpu.coeff(2) == QModPolynomial.generator(4) * (-12)
    with pytest.raises(Exception):
        el.wp_u(1, 6)
