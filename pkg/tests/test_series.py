"""Kernel tests: exact truncated Laurent arithmetic."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chi10.errors import PrecisionError, SeriesError
from chi10.series import INF_PREC, TruncatedSeries, w_to_u

V = ("q",)


def qs(terms, prec, floor=0):
    return TruncatedSeries(V, {(e,): F(c) for e, c in terms.items()}, (prec,), (floor,))


def test_mul_difference_of_squares():
    a = qs({0: 1, 1: 1}, 3)
    b = qs({0: 1, 1: -1}, 3)
    assert (a * b).terms == {(0,): F(1), (2,): F(-1)}


def test_mul_exponent_shift():
    a = TruncatedSeries(V, {(-1,): 1}, (2,), (-1,))
    b = qs({1: 1, 2: 24}, 3, floor=1)
    out = a * b
    assert out.terms == {(0,): F(1), (1,): F(24)}
    assert out.prec == (1 + 1,)


def test_mul_variable_mismatch():
    a = qs({0: 1}, 3)
    b = TruncatedSeries(("qt",), {(0,): 1}, (3,), (0,))
    with pytest.raises(SeriesError):
        a * b


def test_invert_geometric():
    a = qs({0: 1, 1: -1}, 3)
    assert a.invert().terms == {(0,): F(1), (1,): F(1), (2,): F(1)}


def test_invert_zero_series():
    with pytest.raises(SeriesError):
        qs({}, 3).invert()


def test_exp_log_examples():
    q = qs({1: 1}, 3)
    assert q.exp().terms == {(0,): F(1), (1,): F(1), (2,): F(1, 2)}
    l = qs({0: 1, 1: -1}, 4)
    assert l.log().terms == {(1,): F(-1), (2,): F(-1, 2), (3,): F(-1, 3)}


def test_exp_precondition():
    with pytest.raises(SeriesError):
        qs({0: 1, 1: 1}, 4).exp()
    with pytest.raises(SeriesError):
        TruncatedSeries(V, {(-1,): 1}, (4,), (-1,)).exp()


def test_log_of_exp_roundtrip():
    a = qs({1: 2, 3: F(5, 7)}, 8)
    assert a.exp().log().terms == a.terms


def test_derive():
    a = TruncatedSeries(V, {(-1,): 1, (2,): 5}, (3,), (-1,))
    assert a.derive("q").terms == {(-1,): F(-1), (2,): F(10)}
    assert qs({0: 7}, 3).derive("q").is_zero()


def test_substitute_power():
    a = qs({0: 1, 1: 1}, 2)
    out = a.substitute_power("q", 4)
    assert out.terms == {(0,): F(1), (4,): F(1)}
    assert out.prec == (8,)
    assert a.substitute_power("q", 1).terms == a.terms


def test_collapse_power_roundtrip():
    a = qs({0: 1, 1: 3, 2: -2}, 5)
    up = a.substitute_power("q", 3)
    assert up.collapse_power("q", 3).terms == a.terms
    bad = qs({1: 1}, 4)
    with pytest.raises(SeriesError):
        bad.collapse_power("q", 2)


def test_json_roundtrip():
    a = TruncatedSeries(("y", "q"), {(-1, 0): F(3, 2), (2, 1): -4}, (5, 4), (-2, 0))
    b = TruncatedSeries.from_json(a.to_json())
    assert a == b
    assert '"c": "3/2"' in a.to_json()


def test_coeff_beyond_precision():
    a = qs({0: 1}, 3)
    with pytest.raises(PrecisionError):
        a.coeff((3,))
    assert a.coeff((2,)) == 0


def test_declare_exact_and_truncate():
    a = qs({0: 1, 2: 5}, 4)
    e = a.declare_exact("q")
    assert e.prec == (INF_PREC,)
    assert e.truncate("q", 2).terms == {(0,): F(1)}


def test_w_to_u_signs():
    a = TruncatedSeries(("w",), {(-2,): 1, (0,): 2, (2,): 3}, (4,), (-2,))
    u = w_to_u(a)
    assert u.terms == {(-2,): F(-1), (0,): F(2), (2,): F(-3)}
    odd = TruncatedSeries(("w",), {(1,): 1}, (4,), (0,))
    with pytest.raises(SeriesError):
        w_to_u(odd)


small_series = st.builds(
    lambda d: TruncatedSeries(V, {(e,): F(c) for e, c in d.items()}, (6,), (-2,)),
    st.dictionaries(st.integers(-2, 5), st.integers(-9, 9).filter(bool), max_size=5),
)


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_axioms(a, b, c):
    assert ((a * b) * c).terms == (a * (b * c)).terms
    assert (a * b).terms == (b * a).terms
    lhs = a * (b + c)
    rhs = a * b + a * c
    # distributivity on the common knowledge window
    for e in set(lhs.terms) | set(rhs.terms):
        if all(x < p for x, p in zip(e, lhs.prec)) and all(
            x < p for x, p in zip(e, rhs.prec)
        ):
            assert lhs.terms.get(e, F(0)) == rhs.terms.get(e, F(0))


@settings(max_examples=40, deadline=None)
@given(small_series, small_series)
def test_derive_is_a_derivation(a, b):
    lhs = (a * b).derive("q")
    rhs = a.derive("q") * b + a * b.derive("q")
    assert lhs.terms == rhs.terms


@settings(max_examples=40, deadline=None)
@given(small_series)
def test_invert_is_two_sided(a):
    corner = {(e,): c for (e,), c in a.terms.items()}
    if not a.terms or min(a.terms) != (a.support_min("q"),):
        return
    inv = a.invert()
    one = a * inv
    for e, c in one.terms.items():
        assert c == (1 if all(x == 0 for x in e) else 0)


@settings(max_examples=30, deadline=None)
@given(
    st.dictionaries(st.integers(1, 4), st.integers(-6, 6).filter(bool), max_size=4)
)
def test_exp_log_inverse(d):
    a = TruncatedSeries(V, {(e,): F(c) for e, c in d.items()}, (7,), (0,))
    assert a.exp().log().terms == a.terms
