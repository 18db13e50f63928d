"""The cusp form, the partition function and the reference series."""

from fractions import Fraction as F

import pytest

from chi10 import igusa, qmod
from chi10.errors import PrecisionError


def test_borcherds_exponents_display_values():
    tab = igusa.borcherds_exponents(8)
    assert {n: tab(n) for n in (-1, 0, 3, 4, 7, 8)} == {
        -1: 2, 0: 20, 3: -128, 4: 216, 7: -1026, 8: 1616,
    }
    # the display skips q^1, q^2: they vanish
    assert tab(1) == 0 and tab(2) == 0
    assert tab(-2) == 0 and tab(-100) == 0


def test_borcherds_congruence():
    tab = igusa.borcherds_exponents(30)
    for n in range(31):
        if n % 4 in (1, 2):
            assert tab(n) == 0, n


def test_exponent_table_bounds():
    tab = igusa.borcherds_exponents(5)
    with pytest.raises(PrecisionError):
        tab(100)


def test_chi10_leading_factor():
    chi = igusa.chi10_expand("product", 1, 1)
    row = chi.extract("q", 1).extract("qt", 1)
    # p - 2 + 1/p under y = -p
    assert row.terms == {(-1,): F(-1), (0,): F(-2), (1,): F(-1)}


def test_chi10_cross_small():
    assert igusa.chi10_cross_check(2, 2, 8) > 0


def test_chi10_y_symmetry():
    chi = igusa.chi10_expand("product", 3, 3)
    for (r, n, m), c in chi.terms.items():
        assert chi.coeff((-r, n, m)) == c


def test_z_leading_slice_and_symmetry():
    z = igusa.z_partition(2, 2, 10)
    lead = z.extract("q", -1).extract("qt", -1)
    assert [lead.coeff((m,)) for m in range(1, 5)] == [1, -2, 3, -4]
    for (r, n, m), c in z.terms.items():
        if n <= 2 and m <= 2:
            assert z.coeff((r, m, n)) == c


def test_n000_and_first_invariants():
    assert igusa.gw_invariant(0, 0, 0) == 1
    assert igusa.gw_invariant(0, 1, 1) == 576
    assert igusa.gw_invariant(1, 1, 1) == 0
    # the slice (1,1) in the symmetric basis: 24, -48, 576
    fit = igusa.z_slice_basis(1, 1)
    assert fit.coeffs == {0: F(576), 1: F(-48), 2: F(24)}


def test_symmetry_of_invariants():
    for (g, h, d) in [(0, 1, 2), (1, 2, 0), (2, 2, 1)]:
        assert igusa.gw_invariant(g, h, d) == igusa.gw_invariant(g, d, h)


def test_yau_zaslow_small():
    ref = igusa.reference_series("yau_zaslow", 5)
    assert [ref.coeff((n,)) for n in (-1, 0, 1, 2)] == [1, 24, 324, 3200]
    for h in range(4):
        assert igusa.gw_invariant(0, h, 0) == ref.coeff((h - 1,))


def test_kkv_w_equals_z_slice():
    kkv = igusa.reference_series("kkv", 3, wprec=9)
    zw = igusa.z_partition_w(3, 0, 9)
    for t in range(-2, 9):
        for n in range(-1, 4):
            assert kkv.coeff((t, n)) == zw.coeff((t, n, -1)), (t, n)


def test_kkv_y_form():
    kkv = igusa.reference_series("kkv", 3, ywin=8)
    z = igusa.z_partition(3, 0, 8)
    for r in range(-3, 9):
        for n in range(-1, 4):
            assert kkv.coeff((r, n)) == z.coeff((r, n, -1)), (r, n)


def test_toda_potentials():
    f0 = igusa.reference_series("toda_fg", 5, g=0)
    assert f0["eX"].coeff((1,)) == -1
    assert f0["eX"].coeff((2,)) == -(1 + F(1, 8))
    assert f0["eB"].is_zero()
    f1 = igusa.reference_series("toda_fg", 5, g=1)
    assert f1["eB"].coeff((1,)) == 1
    assert f1["eX"].coeff((1,)) == F(-1, 12)
    f2 = igusa.reference_series("toda_fg", 8, g=2)
    p2 = qmod.qmod_recognize(f2["eX"], 2)
    assert p2 == qmod.QModPolynomial.generator(2) * F(-1, 240)
    assert p2.ddc2() == qmod.QModPolynomial.const(F(-1, 240))


def test_genus1_identity():
    n = 22
    ref = igusa.reference_series("k3_genus1", n)
    delta = qmod.delta_series(n).truncate("q", n)
    check = (qmod.eisenstein_series(2, n) * delta.invert()).scale(2)
    for i in range(-1, min(check.prec[0], ref["tau1_F"].prec[0])):
        assert ref["tau1_F"].coeff((i,)) == check.coeff((i,))
    pol = qmod.qmod_recognize(delta * ref["tau1_W"], 4)
    # recognized once and frozen: Delta * q d/dq (2 C2/Delta) = 44 C2^2 + 20 C4
    assert pol == qmod.QModPolynomial({(2, 0, 0): 44, (0, 1, 0): 20}, 4)
    invd = delta.invert()
    lhs = pol.ddc2().evaluate(n) * invd
    rhs = (qmod.eisenstein_series(2, n) * invd).scale(40) + invd.scale(2).derive("q")
    rhs2 = invd.derive("q").scale(2) + (qmod.eisenstein_series(2, n) * invd).scale(40)
    for i in range(-1, 19):
        assert lhs.coeff((i,)) == rhs.coeff((i,)) == rhs2.coeff((i,))


def test_partition_table():
    tab = igusa.partition_table(1, 1, 1)
    assert tab.get(0, 0, 0) == 1
    assert tab.values[(0, 1, 1)] == 576
    assert tab.orders == (1, 1, 1)


def test_threads_do_not_change_results():
    a = igusa._chi10_product("y", 3, 3, 10, threads=1)
    b = igusa._chi10_product("y", 3, 3, 10, threads=3)
    assert a == b
