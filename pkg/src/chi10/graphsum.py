"""Graph sums over balanced weightings and their elliptic-function avatars,
loop factors, multivariate Euler-Maclaurin summation, Worpitzky's identity,
and the commutation relations of diagonal residue operators.

A weighting of the half-edges of a loopless connected graph is balanced when
opposite half-edges cancel and the weights at every vertex sum to zero.  The
graph series

    F(Gamma, k, sigma) = sum over balanced w of
        prod_edges  w(h)/(1 - q^w(h)) * w(h)^k(h) * w(h')^k(h')

(oriented so v(h) precedes v(h') in sigma, negative-weight factors expanded
with leading term -q^|w|) equals the all-zero Fourier row of the product of
derivatives of (wp + 2 C2) over the edges, expanded in the region cut out by
sigma.  Both pipelines are implemented independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

from .constterm import MEElement, const_term_sigma_fourier, const_term_sigma_residue
from .errors import SeriesError
from .qmod import QModPolynomial, bernoulli, eisenstein_series
from .series import TruncatedSeries


# ----------------------------------------------------------------------
# graphs and balanced weightings
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedGraph:
    """Connected multigraph with half-edge exponents and a vertex ordering.

    ``edges`` lists unordered pairs (i, j) of 1-based vertices; ``k`` gives
    the half-edge exponents as one (k_i, k_j) pair per edge, aligned with
    the endpoint order written in ``edges``; ``sigma`` lists the vertices in
    their total order.
    """

    n: int
    edges: tuple
    k: tuple
    sigma: tuple

    def __post_init__(self):
        if sorted(self.sigma) != list(range(1, self.n + 1)):
            raise SeriesError("sigma must order the vertices 1..n")
        for (i, j) in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise SeriesError(f"edge ({i},{j}) out of range")
        if len(self.k) != len(self.edges):
            raise SeriesError("need one exponent pair per edge")
        if not self._connected():
            raise SeriesError("graph must be connected")

    def _connected(self):
        if self.n == 1:
            return True
        adj = {v: set() for v in range(1, self.n + 1)}
        for (i, j) in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for x in adj[v]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return len(seen) == self.n

    def has_loops(self):
        return any(i == j for (i, j) in self.edges)

    def rank(self, v):
        return self.sigma.index(v)

    def oriented(self):
        """Edges as (earlier, later, k_earlier, k_later) in the sigma order."""
        out = []
        for (i, j), (ki, kj) in zip(self.edges, self.k):
            if self.rank(i) < self.rank(j):
                out.append((i, j, ki, kj))
            else:
                out.append((j, i, kj, ki))
        return out

    @classmethod
    def from_json_obj(cls, obj):
        return cls(
            n=int(obj["n"]),
            edges=tuple((int(i), int(j)) for i, j in obj["edges"]),
            k=tuple(tuple(int(x) for x in pair) for pair in obj["k"]),
            sigma=tuple(int(v) for v in obj.get("sigma", range(1, int(obj["n"]) + 1))),
        )


def balanced_enumerate(graph: WeightedGraph, qbound):
    """All balanced weightings whose minimal q-order is at most ``qbound``.

    Weights are reported on the sigma-ascending orientation.  The minimal
    q-order of a weighting is the sum of |w| over its negative entries; a
    cut argument bounds every |w| by qbound, so a pruned depth-first search
    over that box is exhaustive.
    """
    if graph.has_loops():
        raise SeriesError("balanced enumeration requires a loopless graph")
    oriented = graph.oriented()
    m = len(oriented)
    degree_left = {v: 0 for v in range(1, graph.n + 1)}
    for (i, j, _, _) in oriented:
        degree_left[i] += 1
        degree_left[j] += 1
    out = []
    weights = [0] * m
    balance = {v: 0 for v in range(1, graph.n + 1)}

    def rec(idx, cost):
        if idx == m:
            if all(x == 0 for x in balance.values()):
                out.append(tuple(weights))
            return
        i, j, _, _ = oriented[idx]
        for w in range(-qbound, qbound + 1):
            if w == 0:
                continue
            c = cost + (-w if w < 0 else 0)
            if c > qbound:
                continue
            weights[idx] = w
            balance[i] += w
            balance[j] -= w
            degree_left[i] -= 1
            degree_left[j] -= 1
            ok = (degree_left[i] > 0 or balance[i] == 0) and (
                degree_left[j] > 0 or balance[j] == 0
            )
            if ok:
                rec(idx + 1, c)
            degree_left[i] += 1
            degree_left[j] += 1
            balance[i] -= w
            balance[j] += w
        weights[idx] = 0

    rec(0, 0)
    return sorted(out)


def balanced_enumerate_bruteforce(graph: WeightedGraph, qbound, box):
    """Reference enumeration over the full weight box [-box, box]."""
    oriented = graph.oriented()
    m = len(oriented)
    out = []
    ranges = [list(range(-box, 0)) + list(range(1, box + 1))] * m

    def rec(idx, assignment):
        if idx == m:
            balance = {v: 0 for v in range(1, graph.n + 1)}
            cost = 0
            for (i, j, _, _), w in zip(oriented, assignment):
                balance[i] += w
                balance[j] -= w
                if w < 0:
                    cost -= w
            if cost <= qbound and all(x == 0 for x in balance.values()):
                out.append(tuple(assignment))
            return
        for w in ranges[idx]:
            rec(idx + 1, assignment + [w])

    rec(0, [])
    return sorted(out)


def graph_sum_direct(graph: WeightedGraph, qprec) -> TruncatedSeries:
    """F(Gamma, k, sigma) by direct summation over balanced weightings."""
    if graph.has_loops():
        raise SeriesError("graph sums are defined for loopless graphs")
    oriented = graph.oriented()
    total = [Fraction(0)] * qprec
    for weights in balanced_enumerate(graph, qprec - 1):
        term = [Fraction(0)] * qprec
        term[0] = Fraction(1)
        for (i, j, ki, kj), w in zip(oriented, weights):
            scalar = Fraction(w) ** (ki + 1) * Fraction(-w) ** kj
            row = [Fraction(0)] * qprec
            if w > 0:
                jj = 0
                while jj * w < qprec:
                    row[jj * w] = scalar
                    jj += 1
            else:
                jj = 1
                while jj * (-w) < qprec:
                    row[jj * (-w)] = -scalar
                    jj += 1
            new = [Fraction(0)] * qprec
            for d1, c1 in enumerate(term):
                if not c1:
                    continue
                for d2 in range(qprec - d1):
                    if row[d2]:
                        new[d1 + d2] += c1 * row[d2]
            term = new
        for d in range(qprec):
            total[d] += term[d]
    terms = {(d,): c for d, c in enumerate(total) if c}
    return TruncatedSeries(("q",), terms, (qprec,), (0,))


def graph_to_me(graph: WeightedGraph) -> MEElement:
    """The product of edge factors as a multivariate elliptic element.

    Each sigma-oriented edge contributes
    d^(k_h)_{z_h} d^(k_h')_{z_h'} (wp + 2 C2)(z_h - z_h')
      = (-1)^(k_h') * [wp^(k_h + k_h')(z_h - z_h') + 2 C2 if both orders 0].
    """
    labels = set(range(1, graph.n + 1))
    out = MEElement.const(labels, 1)
    for (i, j, ki, kj) in graph.oriented():
        kk = ki + kj
        factor = MEElement.wp_factor(labels, i, j, kk, plus_2c2=(kk == 0))
        if kj % 2:
            factor = -factor
        out = out * factor
    return out


def graph_sum_analytic(graph: WeightedGraph, qprec) -> TruncatedSeries:
    """F(Gamma, k, sigma) as the all-zero Fourier row of the edge product."""
    if graph.has_loops():
        raise SeriesError("graph sums are defined for loopless graphs")
    sigma = {v: r for r, v in enumerate(graph.sigma)}
    return const_term_sigma_fourier(graph_to_me(graph), sigma, qprec)


def graph_sum_residue(graph: WeightedGraph, qprec=None) -> QModPolynomial:
    """Third route: the ordering-dependent residue reduction."""
    sigma = {v: r for r, v in enumerate(graph.sigma)}
    return const_term_sigma_residue(graph_to_me(graph), sigma)


# ----------------------------------------------------------------------
# loop factors
# ----------------------------------------------------------------------


def loop_factor(k1, k2, qprec):
    """Loop contribution L_{k1,k2} = 2 (-1)^k1 sum_d d^(k1+k2+1) q^d/(1-q^d).

    Returns (q-series, closed quasimodular form); zero when k1 + k2 is odd
    (those contributions cancel in pairs).
    """
    if (k1 + k2) % 2:
        return (
            TruncatedSeries.zero(("q",), (qprec,)),
            QModPolynomial.zero(),
        )
    kk = k1 + k2
    sign = -1 if k1 % 2 else 1
    terms = {}
    for d in range(1, qprec):
        val = Fraction(2 * sign) * Fraction(d) ** (kk + 1)
        j = 1
        while j * d < qprec:
            terms[(j * d,)] = terms.get((j * d,), Fraction(0)) + val
            j += 1
    series = TruncatedSeries(("q",), terms, (qprec,), (0,))
    # sum_d d^(2m+1) q^d/(1-q^d) = B_{2m+2}/(4(m+1)) + (2m+2)!/2 * C_{2m+2}
    m = kk // 2
    const = bernoulli(2 * m + 2) / (4 * (m + 1))
    from .elliptic import eis_poly

    closed = (QModPolynomial.const(const) + eis_poly(2 * m + 2) * Fraction(factorial(2 * m + 2), 2)) * Fraction(2 * sign)
    return series, closed


# ----------------------------------------------------------------------
# Euler-Maclaurin, Worpitzky, residue relations
# ----------------------------------------------------------------------


def zeta_negative(k) -> Fraction:
    """zeta(-k) = (-1)^k B_{k+1}/(k+1) for integer k >= 0."""
    return Fraction((-1) ** k) * bernoulli(k + 1) / (k + 1)


def _compositions(total, parts):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def euler_maclaurin_check(poly_terms, m, X):
    """Verify the simplex/zeta form of the composition sum of a polynomial.

    ``poly_terms`` maps exponent tuples of length m to rational coefficients.
    Left side: sum of P over positive integer compositions x_1+...+x_m = X.
    Right side: sum over nonempty subsets I of beta-integral simplex volumes
    with every x_i^k (i not in I) replaced by zeta(-k).  Returns (lhs, rhs).
    """
    lhs = Fraction(0)
    for xs in _compositions(X, m):
        for exps, c in poly_terms.items():
            v = Fraction(c)
            for x, e in zip(xs, exps):
                v *= Fraction(x) ** e
            lhs += v
    rhs = Fraction(0)
    indices = list(range(m))
    for mask in range(1, 1 << m):
        inside = [i for i in indices if mask >> i & 1]
        outside = [i for i in indices if not mask >> i & 1]
        for exps, c in poly_terms.items():
            a_in = [exps[i] for i in inside]
            # beta integral over the simplex sum_{i in I} x_i = X - S
            e_top = sum(a + 1 for a in a_in) - 1
            num = Fraction(1)
            for a in a_in:
                num *= factorial(a)
            num /= factorial(e_top)
            # expand (X - sum_out x_i)^e_top multinomially and substitute zeta
            for split in _weak_compositions(e_top, len(outside) + 1):
                e0, parts = split[0], split[1:]
                coeff = Fraction(factorial(e_top))
                coeff /= factorial(e0)
                for p in parts:
                    coeff /= factorial(p)
                val = Fraction(c) * num * coeff * Fraction(X) ** e0
                for i, p in zip(outside, parts):
                    val *= Fraction(-1) ** p * zeta_negative(exps[i] + p)
                rhs += val
    return lhs, rhs


def _weak_compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def worpitzky_check(m, xmax):
    """sum over permutations of binom(x + m - 1 - ascents, m) = x^m."""
    results = []
    for x in range(xmax + 1):
        total = 0
        for tau in permutations(range(m)):
            asc = sum(1 for i in range(m - 1) if tau[i + 1] > tau[i])
            n = x + m - 1 - asc
            total += comb(n, m) if n >= 0 else 0
        results.append((x, total, x ** m))
    return results


# rational-function residue engine: monomials prod (z_i - z_j)^m_{ij}


class DiffMonomials:
    """Q-linear combinations of products prod_{i<j} (z_i - z_j)^m_ij."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms):
        self.nvars = nvars
        clean = {}
        for key, c in terms.items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(key))] = clean.get(tuple(sorted(key)), Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def monomial(cls, nvars, powers):
        """powers: dict {(i, j): m} with i < j."""
        key = tuple(sorted(((i, j), m) for (i, j), m in powers.items() if m))
        return cls(nvars, {key: Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, DiffMonomials) and self.terms == other.terms

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, Fraction(0)) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return DiffMonomials(self.nvars, terms)

    def __neg__(self):
        return DiffMonomials(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def residue(self, a, b):
        """Coefficient of (z_a - z_b)^(-1) in the z_a-expansion at z_a = z_b."""

        def parity_sign(base_sign, exponent):
            return 1 if base_sign == 1 or exponent % 2 == 0 else -1

        out = {}
        for key, coeff in self.terms.items():
            powers = dict(key)
            pair = (min(a, b), max(a, b))
            m_ab = powers.pop(pair, 0)
            if m_ab >= 0:
                continue  # no pole, no residue
            # (z_b - z_a)^m = (-1)^m (z_a - z_b)^m when stored reversed
            sign_ab = parity_sign(-1 if a > b else 1, m_ab)
            pole = -m_ab
            # expand remaining factors to order pole-1 in eps = z_a - z_b;
            # acc maps (monomial key, eps order) -> coefficient
            acc = {((), 0): Fraction(coeff * sign_ab)}
            for (i, j), mm in sorted(powers.items()):
                if a not in (i, j):
                    new = {}
                    for (k2, order), c2 in acc.items():
                        kk = _merge_pow(k2, (i, j), mm)
                        new[(kk, order)] = new.get((kk, order), Fraction(0)) + c2
                    acc = new
                    continue
                t = j if i == a else i
                base = (min(b, t), max(b, t))
                if i == a:
                    # (z_a - z_t)^mm = sum_s binom(mm,s) (z_b - z_t)^(mm-s) eps^s
                    inner_sign, eps_sign = (1 if b < t else -1), 1
                else:
                    # (z_t - z_a)^mm = sum_s binom(mm,s) (z_t - z_b)^(mm-s) (-eps)^s
                    inner_sign, eps_sign = (1 if t < b else -1), -1
                new = {}
                for s in range(pole):
                    cbin = _gbinom(mm, s)
                    if cbin == 0:
                        continue
                    sgn = parity_sign(inner_sign, mm - s) * parity_sign(eps_sign, s)
                    for (k2, order), c2 in acc.items():
                        if order + s >= pole:
                            continue
                        kk = _merge_pow(k2, base, mm - s)
                        key3 = (kk, order + s)
                        sval = new.get(key3, Fraction(0)) + c2 * cbin * sgn
                        if sval:
                            new[key3] = sval
                        else:
                            new.pop(key3, None)
                acc = new
            for (k2, order), c2 in acc.items():
                if order == pole - 1:
                    s = out.get(k2, Fraction(0)) + c2
                    if s:
                        out[k2] = s
                    else:
                        out.pop(k2, None)
        return DiffMonomials(self.nvars, out)


def _merge_pow(key, pair, mm):
    d = dict(key)
    d[pair] = d.get(pair, 0) + mm
    if d[pair] == 0:
        del d[pair]
    return tuple(sorted(d.items()))


def _gbinom(m, s) -> Fraction:
    """Generalized binomial coefficient binom(m, s) for integer m, s >= 0."""
    num = Fraction(1)
    for t in range(s):
        num *= Fraction(m - t, t + 1)
    return num


def residue_relations_check(sample: DiffMonomials, a, b, c):
    """Verify R_ab R_cb = R_cb R_ab + R_ca R_ab and R_ab R_bc = -R_ba R_ac.

    Operators act on the right: f R_ab R_cb means R_ab first.  Returns the
    number of identities verified (2) or raises with the failing one.
    """
    lhs1 = sample.residue(a, b).residue(c, b)
    rhs1 = sample.residue(c, b).residue(a, b) + sample.residue(c, a).residue(a, b)
    if lhs1 != rhs1:
        raise SeriesError(f"residue relation I fails: {lhs1.terms} vs {rhs1.terms}")
    lhs2 = sample.residue(a, b).residue(b, c)
    rhs2 = -(sample.residue(b, a).residue(a, c))
    if lhs2 != rhs2:
        raise SeriesError(f"residue relation II fails: {lhs2.terms} vs {rhs2.terms}")
    return 2
