"""Graph sums, loop factors, Euler-Maclaurin, Worpitzky, residue relations."""

from fractions import Fraction as F

import pytest

from chi10 import graphsum as G
from chi10.errors import SeriesError
from chi10.qmod import QModPolynomial, eisenstein_series, qmod_recognize


def two_cycle(k=((0, 0), (0, 0)), sigma=(1, 2)):
    return G.WeightedGraph(2, ((1, 2), (1, 2)), k, sigma)


def test_balanced_enumeration_two_cycle():
    ws = G.balanced_enumerate(two_cycle(), 3)
    assert ws == [(-3, 3), (-2, 2), (-1, 1), (1, -1), (2, -2), (3, -3)]


def test_balanced_enumeration_matches_bruteforce():
    graphs = [
        two_cycle(),
        G.WeightedGraph(3, ((1, 2), (2, 3), (1, 3)), ((0, 0),) * 3, (1, 2, 3)),
        G.WeightedGraph(3, ((1, 2), (1, 2), (2, 3), (1, 3)), ((0, 0),) * 4, (3, 1, 2)),
    ]
    for g in graphs:
        assert G.balanced_enumerate(g, 3) == G.balanced_enumerate_bruteforce(g, 3, 7)


def test_single_edge_no_weightings():
    g = G.WeightedGraph(2, ((1, 2),), ((0, 0),), (1, 2))
    assert G.balanced_enumerate(g, 5) == []
    assert G.graph_sum_direct(g, 6).is_zero()
    assert G.graph_sum_analytic(g, 6).is_zero()


def test_path_graph_vanishes():
    g = G.WeightedGraph(3, ((1, 2), (2, 3)), ((0, 0), (0, 0)), (1, 2, 3))
    assert G.graph_sum_direct(g, 7).is_zero()
    assert G.graph_sum_analytic(g, 7).is_zero()


def test_two_cycle_closed_form():
    s = G.graph_sum_direct(two_cycle(), 9)
    expected = eisenstein_series(2, 9).derive("q").scale(2)
    assert s.same_terms(expected)
    assert qmod_recognize(s, 4) == QModPolynomial({(2, 0, 0): -4, (0, 1, 0): 20}, 4)


def test_two_cycle_triple_pipeline():
    g = two_cycle()
    d = G.graph_sum_direct(g, 9)
    a = G.graph_sum_analytic(g, 9)
    r = G.graph_sum_residue(g)
    assert d.same_terms(a)
    assert r.evaluate(9).same_terms(d)


def test_triangle_dual_pipeline():
    g = G.WeightedGraph(3, ((1, 2), (2, 3), (1, 3)), ((0, 0),) * 3, (1, 2, 3))
    d = G.graph_sum_direct(g, 9)
    a = G.graph_sum_analytic(g, 9)
    assert d.same_terms(a)
    r = G.graph_sum_residue(g)
    assert r.evaluate(9).same_terms(d)


def test_nonzero_half_edge_exponents():
    for kpair in [((1, 1), (0, 0)), ((2, 0), (0, 0)), ((1, 0), (0, 1)), ((2, 2), (1, 1))]:
        g = two_cycle(k=kpair)
        d = G.graph_sum_direct(g, 9)
        a = G.graph_sum_analytic(g, 9)
        assert d.same_terms(a), kpair


def test_sigma_dependence_consistency():
    g1 = G.WeightedGraph(3, ((1, 2), (2, 3), (1, 3)), ((1, 0), (0, 1), (0, 0)), (1, 2, 3))
    g2 = G.WeightedGraph(3, ((1, 2), (2, 3), (1, 3)), ((1, 0), (0, 1), (0, 0)), (3, 1, 2))
    for g in (g1, g2):
        assert G.graph_sum_direct(g, 8).same_terms(G.graph_sum_analytic(g, 8))


def test_loops_rejected():
    with pytest.raises(SeriesError):
        G.graph_sum_direct(
            G.WeightedGraph(2, ((1, 1), (1, 2), (1, 2)), ((0, 0),) * 3, (1, 2)), 5
        )


def test_loop_factor_values():
    ser, closed = G.loop_factor(0, 0, 9)
    assert closed == QModPolynomial.generator(2) * 2 + QModPolynomial.const(F(1, 12))
    assert ser.same_terms(closed.evaluate(9))
    ser, closed = G.loop_factor(1, 1, 9)
    assert closed == QModPolynomial.generator(4) * (-24) + QModPolynomial.const(F(1, 120))
    assert ser.same_terms(closed.evaluate(9))
    ser, closed = G.loop_factor(0, 1, 9)
    assert ser.is_zero() and closed.is_zero()


def test_loop_factor_ddc2():
    # d/dC2 of the loop factor is 2 exactly when both exponents vanish
    _, l00 = G.loop_factor(0, 0, 5)
    assert l00.ddc2() == QModPolynomial.const(2)
    _, l11 = G.loop_factor(1, 1, 5)
    assert l11.ddc2().is_zero()


def test_euler_maclaurin_examples():
    l, r = G.euler_maclaurin_check({(0,): 1}, 1, 9)
    assert l == r == 1
    l, r = G.euler_maclaurin_check({(0, 0): 1}, 2, 3)
    assert l == r == 2
    l, r = G.euler_maclaurin_check({(1, 2, 0): 1}, 3, 10)
    assert l == r


def test_euler_maclaurin_monomials():
    for m in (1, 2, 3):
        for exps in [(2,) * m, tuple(range(m)), (0,) * m]:
            l, r = G.euler_maclaurin_check({exps: F(3, 7)}, m, 6)
            assert l == r, (m, exps)


def test_worpitzky():
    assert all(t == p for (_, t, p) in G.worpitzky_check(1, 8))
    assert all(t == p for (_, t, p) in G.worpitzky_check(2, 8))
    assert all(t == p for (_, t, p) in G.worpitzky_check(4, 10))


def test_residue_relations_samples():
    samples = [
        {(1, 2): -1, (1, 3): -1},
        {(2, 3): -2, (1, 2): -1},
        {(1, 2): -1, (1, 3): -1, (2, 3): -1},
        {(1, 2): -3},
        {(1, 2): -1, (2, 3): 2},
        {},
    ]
    for powers in samples:
        f = G.DiffMonomials.monomial(3, powers)
        assert G.residue_relations_check(f, 1, 2, 3) == 2
        assert G.residue_relations_check(f, 2, 3, 1) == 2


def test_diffmono_residue_basic():
    f = G.DiffMonomials.monomial(2, {(1, 2): -1})
    r = f.residue(1, 2)
    assert r.terms == {(): F(1)}
    r2 = f.residue(2, 1)
    assert r2.terms == {(): F(-1)}


def test_graph_json_roundtrip():
    obj = {"n": 3, "edges": [[1, 2], [2, 3], [1, 3]], "k": [[0, 1], [0, 0], [2, 0]], "sigma": [2, 1, 3]}
    g = G.WeightedGraph.from_json_obj(obj)
    assert g.n == 3 and g.k[0] == (0, 1) and g.sigma == (2, 1, 3)
