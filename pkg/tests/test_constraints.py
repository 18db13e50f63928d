"""Property checks and the uniqueness kernel."""

from fractions import Fraction as F

import pytest

from chi10 import constraints as C
from chi10 import igusa
from chi10.jacobi import JacobiPolynomial
from chi10.qmod import QModPolynomial
from chi10.series import TruncatedSeries


def test_property1_pass_and_fail():
    zw = igusa.z_partition_w(2, 2, 7)
    assert C.check_property1(zw).ok()
    bad = TruncatedSeries(
        ("w", "q", "qt"), {(-3, 0, 0): 1}, (5, 3, 3), (-3, -1, -1)
    )
    rep = C.check_property1(bad)
    assert rep.status == "fail" and rep.witness == (-3, 0, 0)
    zero = TruncatedSeries.zero(("w", "q", "qt"), (4, 3, 3), (-2, -1, -1))
    assert C.check_property1(zero).ok()


def test_property2_base_case_constant():
    z = igusa.z_partition(1, 7, 12)
    rep = C.check_property2(z, 0)
    assert rep.ok()
    # J_{0,0} = Q; the constant is -1 in the convention where N(0,0,0) = +1
    assert rep.data["poly"] == JacobiPolynomial({(0, 0, 0, 0): F(-1)}, 0, 0)


def test_property2_h1_golden():
    z = igusa.z_partition(1, 7, 12)
    rep = C.check_property2(z, 1)
    assert rep.ok()
    assert rep.data["poly"] == JacobiPolynomial({(0, 0, 0, 1): F(-2)}, 0, 1)


def test_property2_support_violation_fails():
    bad = TruncatedSeries(
        ("y", "q", "qt"), {(2, -1, 0): 1}, (9, 2, 8), (-8, -1, -1)
    )
    rep = C.check_property2(bad, 0)
    assert rep.status == "fail"


def test_property3_small():
    zw = igusa.z_partition_w(8, 2, 7)
    rep = C.check_property3(zw, 2, 2)
    assert rep.ok()
    polys = rep.data["polys"]
    assert polys[(0, 0)] == QModPolynomial.const(1)
    assert polys[(1, 0)] == QModPolynomial.generator(2) * (-2)
    # d = 1 slices are purely modular (2d - 2 = 0 kills the derivative)
    assert polys[(2, 1)].is_modular()


def test_property3_zero_vacuous():
    zero = TruncatedSeries.zero(("w", "q", "qt"), (7, 9, 3), (-2, -1, -1))
    assert C.check_property3(zero, 2, 1).ok()


def test_ansatz_goldens():
    z = igusa.z_partition(2, 9, 16)
    assert C.ansatz_recognize(z, 0) == {0: QModPolynomial.const(1)}
    assert C.ansatz_recognize(z, 1) == {0: QModPolynomial.const(-24)}
    out = C.ansatz_recognize(z, 2)
    assert out == {
        0: QModPolynomial.const(324),
        2: QModPolynomial.generator(4) * 2160,
    }
    # the nonzero coefficients are purely modular of weight 2i
    for i, poly in out.items():
        assert poly.is_modular()


def test_kernel_dimensions_and_vector():
    pinned = C.uniqueness_kernel(2, 2, 2, fix_a000=True)
    assert pinned.dimension == 0
    free = C.uniqueness_kernel(2, 2, 2, fix_a000=False)
    assert free.dimension == 1
    vec = dict(zip(free.unknowns, free.basis[0]))
    scale = vec[("c", 0, 0, 0)]
    assert scale != 0
    for u in free.unknowns:
        if u[0] != "c":
            continue
        _, g, h, d = u
        expect = igusa.z_slice_basis(h, d).coeffs.get(g, F(0))
        assert vec[u] / scale == expect, u


def test_kernel_trivial_window():
    assert C.uniqueness_kernel(0, 0, 0, fix_a000=True).dimension == 0
    assert C.uniqueness_kernel(0, 0, 0, fix_a000=False).dimension == 1


def test_kernel_monotone_in_window():
    d1 = C.uniqueness_kernel(1, 1, 1, fix_a000=False).dimension
    d2 = C.uniqueness_kernel(2, 2, 2, fix_a000=False).dimension
    assert d1 >= d2 >= 1
