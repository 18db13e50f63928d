"""Constant terms of multivariate elliptic functions.

Elements of the ring ME = Q[C2, C4, C6, wp^(k)(z_a - z_b)] are handled
symbolically, together with one auxiliary odd function A(z) = 1/w - sum 2l
C_{2l} w^(2l-1) (the logarithmic derivative of the theta function), whose
powers appear in the reduction of constant terms to iterated residues.

Two independent routes compute the constant Fourier coefficient [F]_{p^0}:

* the Fourier route expands every generator in the ratio variables
  p_a/p_b inside the region determined by a vertex ordering sigma and reads
  the row where every exponent vanishes;

* the residue route rewrites [F]_{p^0} as a sum of iterated residues of
  F * A^m / m! along non-recurring index sequences, which stays inside ME
  and lands in QMod when one variable is left.

All residues are in the w-coordinates (w_a = log p_a), where the operator
R_{ab} is literally the coefficient of (w_a - w_b)^(-1).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

from .elliptic import afun_w, wp_w
from .errors import SeriesError
from .qmod import QModPolynomial, qmod_recognize
from .series import TruncatedSeries


# ----------------------------------------------------------------------
# the symbolic ring
# ----------------------------------------------------------------------


def wp_key(i, j, k):
    """Canonical generator (min, max, k) and the parity sign of swapping."""
    if i == j:
        raise SeriesError("wp generator needs distinct variables")
    if i < j:
        return (i, j, k), 1
    return (j, i, k), (-1) ** k


class MEElement:
    """Element of ME (optionally times powers of a single A-symbol).

    Terms map ``(cexp, wps, apow)`` to rational coefficients, where ``cexp``
    is the (C2, C4, C6) exponent triple, ``wps`` a sorted tuple of canonical
    generators (a, b, k) with a < b, and ``apow`` the power of the element's
    A-symbol ``a_pair`` (None when no A is present).
    """

    __slots__ = ("labels", "terms", "a_pair")

    def __init__(self, labels, terms, a_pair=None):
        self.labels = frozenset(labels)
        clean = {}
        for (cexp, wps, apow), c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            if apow and a_pair is None:
                raise SeriesError("A-power present without an A-pair")
            for (a, b, k) in wps:
                if a >= b or a not in self.labels or b not in self.labels:
                    raise SeriesError(f"bad generator {(a, b, k)} for labels {sorted(self.labels)}")
            clean[(tuple(cexp), tuple(sorted(wps)), int(apow))] = c
        self.terms = clean
        self.a_pair = tuple(a_pair) if a_pair else None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, labels):
        return cls(labels, {})

    @classmethod
    def const(cls, labels, value):
        return cls(labels, {((0, 0, 0), (), 0): Fraction(value)})

    @classmethod
    def from_qmod(cls, labels, poly: QModPolynomial):
        return cls(labels, {(e, (), 0): c for e, c in poly.terms.items()})

    @classmethod
    def wp_factor(cls, labels, i, j, k, plus_2c2=False):
        """wp^(k)(z_i - z_j), optionally with the +2 C2 completion (k = 0)."""
        key, sign = wp_key(i, j, k)
        terms = {((0, 0, 0), (key,), 0): Fraction(sign)}
        if plus_2c2:
            if k != 0:
                raise SeriesError("the 2 C2 completion only pairs with wp itself")
            terms[((1, 0, 0), (), 0)] = Fraction(2)
        return cls(labels, terms)

    # -- basics ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, MEElement)
            and self.labels == other.labels
            and self.terms == other.terms
            and self.a_pair == other.a_pair
        )

    def __repr__(self):
        return f"MEElement(labels={sorted(self.labels)}, {len(self.terms)} terms, A={self.a_pair})"

    def __add__(self, other):
        if self.labels != other.labels:
            raise SeriesError("label mismatch")
        pair = self.a_pair or other.a_pair
        if self.a_pair and other.a_pair and self.a_pair != other.a_pair:
            raise SeriesError("A-pair mismatch")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, Fraction(0)) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return MEElement(self.labels, terms, pair)

    def __neg__(self):
        return MEElement(self.labels, {k: -c for k, c in self.terms.items()}, self.a_pair)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return MEElement(self.labels, {k: v * Fraction(c) for k, v in self.terms.items()}, self.a_pair)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self.labels != other.labels:
            raise SeriesError("label mismatch")
        pair = self.a_pair or other.a_pair
        if self.a_pair and other.a_pair and self.a_pair != other.a_pair:
            raise SeriesError("A-pair mismatch")
        terms = {}
        for (ca, wa, pa), va in self.terms.items():
            for (cb, wb, pb), vb in other.terms.items():
                key = (
                    (ca[0] + cb[0], ca[1] + cb[1], ca[2] + cb[2]),
                    tuple(sorted(wa + wb)),
                    pa + pb,
                )
                s = terms.get(key, Fraction(0)) + va * vb
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return MEElement(self.labels, terms, pair)

    __rmul__ = __mul__

    def mul_apow(self, pair, power):
        """Multiply by A(z_pair)^power (attaching the A-symbol)."""
        if power == 0:
            return self
        if self.a_pair and self.a_pair != tuple(pair):
            raise SeriesError("element already carries a different A-pair")
        terms = {(c, w, p + power): v for (c, w, p), v in self.terms.items()}
        return MEElement(self.labels, terms, tuple(pair))

    def ddc2(self):
        if any(p for (_, _, p) in self.terms):
            raise SeriesError("d/dC2 is defined on A-free elements only")
        terms = {}
        for (cexp, wps, p), v in self.terms.items():
            a = cexp[0]
            if a:
                terms[((a - 1,) + cexp[1:], wps, p)] = v * a
        return MEElement(self.labels, terms, None)

    def weight(self):
        """Weight of a homogeneous element (C_k: k, wp^(k): k+2, A: 1)."""
        ws = set()
        for (cexp, wps, p), _ in self.terms.items():
            w = 2 * cexp[0] + 4 * cexp[1] + 6 * cexp[2] + sum(k + 2 for (_, _, k) in wps) + p
            ws.add(w)
        if len(ws) > 1:
            raise SeriesError(f"element is not weight-homogeneous: {sorted(ws)}")
        return ws.pop() if ws else 0

    def as_qmod(self) -> QModPolynomial:
        """Convert an element with no generators left into a QMod polynomial."""
        out = {}
        for (cexp, wps, p), v in self.terms.items():
            if wps or p:
                raise SeriesError("element still carries elliptic generators")
            out[cexp] = out.get(cexp, Fraction(0)) + v
        return QModPolynomial(out)

    def rename(self, mapping):
        """Relabel variables through an injective mapping."""
        labels = frozenset(mapping[x] for x in self.labels)
        terms = {}
        for (cexp, wps, p), v in self.terms.items():
            sign = 1
            new = []
            for (a, b, k) in wps:
                key, s = wp_key(mapping[a], mapping[b], k)
                new.append(key)
                sign *= s
            terms_key = (cexp, tuple(sorted(new)), p)
            terms[terms_key] = terms.get(terms_key, Fraction(0)) + v * sign
        pair = None
        if self.a_pair:
            c, n = self.a_pair
            pair = (mapping[c], mapping[n])
            if pair[0] > pair[1]:
                # A is odd; flip orientation of every power
                terms = {
                    k: (v if k[2] % 2 == 0 else -v) for k, v in terms.items()
                }
                pair = (pair[1], pair[0])
        return MEElement(labels, terms, pair)


# ----------------------------------------------------------------------
# the residue operator R_ab
# ----------------------------------------------------------------------


def _omega_mul(x, y, lo, hi):
    """Multiply two omega-Laurent dicts {t: {key: coeff}} keeping lo <= t <= hi."""
    out = {}
    for ta, da in x.items():
        for tb, db in y.items():
            t = ta + tb
            if t < lo or t > hi:
                continue
            tgt = out.setdefault(t, {})
            for ka, va in da.items():
                for kb, vb in db.items():
                    key = (
                        (ka[0][0] + kb[0][0], ka[0][1] + kb[0][1], ka[0][2] + kb[0][2]),
                        tuple(sorted(ka[1] + kb[1])),
                        ka[2] + kb[2],
                    )
                    s = tgt.get(key, Fraction(0)) + va * vb
                    if s:
                        tgt[key] = s
                    else:
                        tgt.pop(key, None)
    return {t: d for t, d in out.items() if d}


def _poly_terms_keyed(poly: QModPolynomial, wps=(), apow=0):
    return {(e, tuple(wps), apow): c for e, c in poly.terms.items()}


def me_residue(F: MEElement, a, b, times_omega=False) -> MEElement:
    """R_ab: the residue at z_a = z_b, landing on the labels without a.

    With ``times_omega`` the residue of (w_a - w_b) * F is taken instead,
    i.e. the coefficient of (w_a - w_b)^(-2); this is the combination
    entering the holomorphic anomaly formula.
    """
    if a == b or a not in F.labels or b not in F.labels:
        raise SeriesError(f"residue pair {(a, b)} not in labels {sorted(F.labels)}")
    new_labels = F.labels - {a}
    target = -2 if times_omega else -1
    out_terms = {}
    out_pair = None
    for (cexp, wps, apow), coeff in F.terms.items():
        pole_gens, moving, resting = [], [], []
        for gen in wps:
            (i, j, k) = gen
            if {i, j} == {a, b}:
                pole_gens.append(gen)
            elif a in (i, j):
                moving.append(gen)
            else:
                resting.append(gen)
        a_role = None  # how the A-symbol involves the residue variable
        if apow:
            c, n = F.a_pair
            if {c, n} == {a, b}:
                a_role = "pole"
            elif a == c:
                a_role = ("move_c", n)
            elif a == n:
                a_role = ("move_n", c)
        pole_order = sum(k + 2 for (_, _, k) in pole_gens)
        if a_role == "pole":
            pole_order += apow
        if pole_order + target < 0:
            continue  # not enough pole to reach the residue coefficient
        lo, hi = -pole_order, target + pole_order
        prod = {0: {(cexp, tuple(sorted(resting)), 0): coeff}}
        # pole factors wp^(k)(z_i - z_j) with {i, j} = {a, b}: Laurent in
        # omega = w_a - w_b (sign (-1)^k when the stored orientation is b, a)
        for (i, j, k) in pole_gens:
            sign = (-1) ** k if a > b else 1
            lq = wp_w(k, hi + 1)
            piece = {
                e: _poly_terms_keyed(poly * sign)
                for e, poly in lq.terms.items()
                if e <= hi
            }
            prod = _omega_mul(prod, piece, lo, hi)
        # A-pole: A(omega)^apow, with A odd under orientation flip
        if a_role == "pole":
            c, n = F.a_pair
            sign = 1 if (c, n) == (a, b) else -1
            lq = afun_w(hi + 1)
            single = {
                e: _poly_terms_keyed(poly * sign)
                for e, poly in lq.terms.items()
                if e <= hi
            }
            for _ in range(apow):
                prod = _omega_mul(prod, single, lo, hi)
        # moving wp factors: Taylor expansion around z_a = z_b
        for (i, j, k) in moving:
            piece = {}
            if i == a:
                # wp^(k)(z_a - z_j) = sum_s wp^(k+s)(z_b - z_j) omega^s / s!
                for s in range(hi + 1):
                    key, sgn = wp_key(b, j, k + s)
                    piece.setdefault(s, {})[((0, 0, 0), (key,), 0)] = Fraction(
                        sgn, factorial(s)
                    )
            else:
                # wp^(k)(z_i - z_a) = sum_s wp^(k+s)(z_i - z_b) (-omega)^s / s!
                for s in range(hi + 1):
                    key, sgn = wp_key(i, b, k + s)
                    piece.setdefault(s, {})[((0, 0, 0), (key,), 0)] = Fraction(
                        sgn * (-1) ** s, factorial(s)
                    )
            prod = _omega_mul(prod, piece, lo, hi)
        # moving A factor: the symbol migrates from a to b
        if a_role is not None and a_role != "pole":
            kind, t_label = a_role
            pr = (min(b, t_label), max(b, t_label))
            single = {}
            for s in range(hi + 1):
                if kind == "move_c":
                    # A(z_a - z_t): derivatives of A at z_b - z_t, factor 1
                    arg, outer = (b, t_label), 1
                else:
                    # A(z_t - z_a): derivatives of A at z_t - z_b, factor (-1)^s
                    arg, outer = (t_label, b), (-1) ** s
                val = Fraction(outer, factorial(s))
                if s == 0:
                    sign = 1 if arg[0] < arg[1] else -1  # A odd
                    single.setdefault(0, {})[((0, 0, 0), (), 1)] = val * sign
                else:
                    # d^s A = -wp^(s-1) - 2 C2 [s = 1]
                    key, sgn = wp_key(arg[0], arg[1], s - 1)
                    row = single.setdefault(s, {})
                    row[((0, 0, 0), (key,), 0)] = -val * sgn
                    if s == 1:
                        row[((1, 0, 0), (), 0)] = row.get(((1, 0, 0), (), 0), Fraction(0)) - 2 * val
            for _ in range(apow):
                prod = _omega_mul(prod, single, lo, hi)
        row = prod.get(target)
        if not row:
            continue
        for key, v in row.items():
            if key[2]:
                if a_role is None or a_role == "pole":
                    raise SeriesError("stray A-power in residue output")
                pr = (min(b, a_role[1]), max(b, a_role[1]))
                if out_pair is None:
                    out_pair = pr
                elif out_pair != pr:
                    raise SeriesError("conflicting A-pairs in residue output")
            s = out_terms.get(key, Fraction(0)) + v
            if s:
                out_terms[key] = s
            else:
                out_terms.pop(key, None)
    return MEElement(new_labels, out_terms, out_pair)

# ----------------------------------------------------------------------
# Fourier route
# ----------------------------------------------------------------------


def _edge_factor_rows(k_order, qprec, emax):
    """Rows of d^k(wp + 2 C2) in a ratio variable r, region |q| < |r| < 1.

    Returns {(e, d): coeff} for the expansion sum_{a != 0} a^(k+1) r^a/(1-q^a),
    with positive-a tails truncated at ``emax``.
    """
    rows = {}
    for a in range(1, emax + 1):
        val = Fraction(a) ** (k_order + 1)
        j = 0
        while j * a < qprec:
            rows[(a, j * a)] = val
            j += 1
    for a in range(1, qprec):
        val = -((Fraction(-a)) ** (k_order + 1))
        j = 1
        while j * a < qprec:
            rows[(-a, j * a)] = rows.get((-a, j * a), Fraction(0)) + val
            j += 1
    return rows


def _suffix_components(labels, gens):
    """For each suffix gens[i:], the partition of labels into components."""
    out = []
    for i in range(len(gens) + 1):
        parent = {x: x for x in labels}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (a, b, _) in gens[i:]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps = {}
        for x in labels:
            comps.setdefault(find(x), []).append(x)
        out.append(list(comps.values()))
    return out


def _cancel_cost(vec, pos, components, rank):
    """Lower bound on the q-cost of flows on the remaining generators that
    cancel ``vec``; None when cancellation is impossible.

    Within each component, flows along the rank order carry positive
    exponents for free in the descending direction only, so every rank
    prefix with positive accumulated exponent costs at least that much.
    """
    need = 0
    for comp in components:
        total = 0
        run = 0
        mx = 0
        for v in sorted(comp, key=rank.__getitem__):
            run += vec[pos[v]]
            total = run
            if run > mx:
                mx = run
        if total != 0:
            return None
        need += mx
    return need


def const_term_sigma_fourier(F: MEElement, sigma, qprec) -> TruncatedSeries:
    """[F]_{p^0, sigma} by direct multivariate Fourier expansion.

    ``sigma`` maps labels to ranks; generators are expanded in the ratio
    variable of their sigma-ascending orientation.  Exponent vectors live on
    the sorted labels; partial vectors that cannot be balanced by the
    remaining generators within the q-budget are pruned.
    """
    if F.a_pair is not None:
        raise SeriesError("Fourier route needs an A-free element")
    labels = sorted(F.labels)
    pos = {x: i for i, x in enumerate(labels)}
    total = {n: Fraction(0) for n in range(qprec)}
    zero_vec = (0,) * len(labels)
    c2row = QModPolynomial.generator(2).evaluate(qprec)
    for (cexp, wps, _), coeff in F.terms.items():
        m = len(wps)
        emax = max(m, 1) * (qprec - 1) + 2
        suffix = _suffix_components(labels, list(wps))
        acc = {(zero_vec, 0): Fraction(1)}
        for idx, (i, j, k) in enumerate(wps):
            # orient ascending in sigma; wp^(k) is even/odd per k
            if sigma[i] < sigma[j]:
                hi_v, lo_v, sign = i, j, 1
            else:
                hi_v, lo_v, sign = j, i, (-1) ** k
            rows = list(_edge_factor_rows(k, qprec, emax).items())
            comps = suffix[idx + 1]
            new = {}
            for (vec, d0), c0 in acc.items():
                for (e, d), ce in rows:
                    d2 = d0 + d
                    if d2 >= qprec:
                        continue
                    v = list(vec)
                    v[pos[hi_v]] += e
                    v[pos[lo_v]] -= e
                    cost = _cancel_cost(v, pos, comps, sigma)
                    if cost is None or cost + d2 >= qprec:
                        continue
                    key = (tuple(v), d2)
                    s = new.get(key, Fraction(0)) + c0 * ce * sign
                    if s:
                        new[key] = s
                    else:
                        new.pop(key, None)
            if k == 0:
                # the generator is wp itself: subtract the 2 C2 completion
                for (vec, d0), c0 in acc.items():
                    if _cancel_cost(vec, pos, comps, sigma) is None:
                        continue
                    for n in range(qprec - d0):
                        cc = c2row.coeff((n,))
                        if cc:
                            key = (vec, d0 + n)
                            s = new.get(key, Fraction(0)) - 2 * c0 * cc
                            if s:
                                new[key] = s
                            else:
                                new.pop(key, None)
            acc = new
        cpoly = QModPolynomial({cexp: coeff}).evaluate(qprec)
        for (vec, d0), c0 in acc.items():
            if vec != zero_vec:
                continue
            for n in range(qprec - d0):
                cc = cpoly.coeff((n,))
                if cc:
                    total[d0 + n] += c0 * cc
    terms = {(n,): c for n, c in total.items() if c}
    return TruncatedSeries(("q",), terms, (qprec,), (0,))


def const_term_avg_fourier(F: MEElement, qprec) -> TruncatedSeries:
    labels = sorted(F.labels)
    out = TruncatedSeries.zero(("q",), (qprec,))
    perms = list(permutations(labels))
    for p in perms:
        sigma = {x: r for r, x in enumerate(p)}
        out = out + const_term_sigma_fourier(F, sigma, qprec)
    return out.scale(Fraction(1, len(perms)))


# ----------------------------------------------------------------------
# residue route
# ----------------------------------------------------------------------


def _nonrec_sequences(labels, lo, hi):
    """Non-recurring sequences lo, ..., hi using labels, length >= 2."""
    middle = [x for x in labels if x not in (lo, hi)]
    out = []
    for r in range(len(middle) + 1):
        for mid in permutations(middle, r):
            out.append((lo,) + mid + (hi,))
    return out


def const_term_avg_residue(F: MEElement) -> QModPolynomial:
    """[F]_{p^0} averaged over orderings, via iterated residues.

    [F]_{p^0} = sum_{m >= 1} sum over non-recurring sequences from the first
    to the last label of [ (F A^m / m!) R_{i1 i2} ... R_{im i(m+1)} ]_{p^0}.
    """
    if F.a_pair is not None:
        raise SeriesError("constant-term input must be A-free")
    labels = sorted(F.labels)
    if len(labels) == 1:
        return F.as_qmod()
    lo, hi = labels[0], labels[-1]
    total = QModPolynomial.zero()
    for seq in _nonrec_sequences(labels, lo, hi):
        m = len(seq) - 1
        pair = (min(lo, hi), max(lo, hi))
        G = F.mul_apow(pair, m).scale(Fraction(1, factorial(m)))
        for x, y in zip(seq, seq[1:]):
            G = me_residue(G, x, y)
        if G.a_pair is not None and any(k[2] for k in G.terms):
            raise SeriesError("A-power survived the residue chain")
        total = total + const_term_avg_residue(MEElement(G.labels, G.terms))
    return total


def _binom_poly_in_a(shift, r):
    """Coefficients of binom(A + shift, r) as a polynomial in A."""
    coeffs = [Fraction(1)]  # constant polynomial 1
    for t in range(r):
        # multiply by (A + shift - t)
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] += c * (shift - t)
        coeffs = new
    inv = Fraction(1, factorial(r))
    return [c * inv for c in coeffs]


def const_term_sigma_residue(F: MEElement, sigma) -> QModPolynomial:
    """[F]_{p^0, sigma} via the ordering-dependent binomial reduction."""
    if F.a_pair is not None:
        raise SeriesError("constant-term input must be A-free")
    labels = sorted(F.labels)
    if len(labels) == 1:
        return F.as_qmod()
    lo, hi = labels[0], labels[-1]
    total = QModPolynomial.zero()
    for seq in _nonrec_sequences(labels, lo, hi):
        ell = len(seq)
        shift = ell - 2 - sum(
            1 for x, y in zip(seq, seq[1:]) if sigma[x] > sigma[y]
        )
        pair = (min(lo, hi), max(lo, hi))
        coeffs = _binom_poly_in_a(shift, ell - 1)
        G = MEElement.zero(F.labels)
        for power, c in enumerate(coeffs):
            if c:
                G = G + F.mul_apow(pair, power).scale(c)
        for x, y in zip(seq, seq[1:]):
            G = me_residue(G, x, y)
        if any(k[2] for k in G.terms):
            raise SeriesError("A-power survived the residue chain")
        sub = {x: r for x, r in sigma.items() if x in G.labels}
        total = total + const_term_sigma_residue(MEElement(G.labels, G.terms), sub)
    return total


# ----------------------------------------------------------------------
# public checks
# ----------------------------------------------------------------------


def const_term_single(F: MEElement, qprec):
    """Constant term of a single-variable elliptic element, both routes.

    ``F`` must live on exactly two labels and depend on their difference
    only (which is how one-variable elements are represented here).  Returns
    (polynomial, fourier q-series, d/dC2 of the polynomial) after verifying
    the w-route against the Fourier route and the derivative formula

        d/dC2 [F]_{p^0} = [d/dC2 F]_{p^0} - 2 [F]_{w^-2}.
    """
    if len(F.labels) != 2:
        raise SeriesError("single-variable elements are carried on two labels")
    poly = const_term_avg_residue(F)
    four = const_term_avg_fourier(F, qprec)
    if not poly.evaluate(qprec).same_terms(four):
        raise SeriesError("symbolic and Fourier constant terms disagree")
    dd = poly.ddc2()
    rhs = const_term_avg_residue(F.ddc2()) - _w_minus2_row(F) * 2
    if not (dd - rhs).is_zero():
        raise SeriesError("constant-term derivative formula failed")
    return poly, four, dd


def w_laurent_row(F: MEElement, row_exp) -> QModPolynomial:
    """[F]_{w^row_exp} for a two-label pure-difference element.

    The two-label generators all depend on the single difference w, so the
    element has an honest w-Laurent expansion with QMod coefficients.
    """
    out = QModPolynomial.zero()
    for (cexp, wps, apow), coeff in F.terms.items():
        if apow:
            raise SeriesError("w-expansion of A-powers not supported here")
        total_pole = sum(k + 2 for (_, _, k) in wps)
        hi = row_exp + total_pole
        prod = {0: QModPolynomial.const(1)}
        for (i, j, k) in wps:
            lq = wp_w(k, hi + 1)
            new = {}
            for e0, p0 in prod.items():
                for e, poly in lq.terms.items():
                    e2 = e0 + e
                    if e2 > hi:
                        continue
                    new[e2] = new.get(e2, QModPolynomial.zero()) + p0 * poly
            prod = new
        row = prod.get(row_exp)
        if row is not None:
            out = out + QModPolynomial({cexp: coeff}) * row
    return out


def _w_minus2_row(F: MEElement) -> QModPolynomial:
    return w_laurent_row(F, -2)


def const_term_multi(F: MEElement, mode, qprec, sigma=None):
    """Constant term of a multivariate element with the dual-route check.

    mode "sigma": fixed-ordering slice (returns the q-series and the
    binomial-reduction polynomial, both verified equal).  mode "averaged":
    additionally recognizes the result at the element's weight.
    """
    if mode == "sigma":
        if sigma is None:
            raise SeriesError("mode sigma needs an ordering")
        four = const_term_sigma_fourier(F, sigma, qprec)
        poly = const_term_sigma_residue(F, sigma)
        if not poly.evaluate(qprec).same_terms(four):
            raise SeriesError("sigma constant-term routes disagree")
        return four, poly
    if mode != "averaged":
        raise SeriesError(f"unknown mode {mode!r}")
    four = const_term_avg_fourier(F, qprec)
    poly = const_term_avg_residue(F)
    if not poly.evaluate(qprec).same_terms(four):
        raise SeriesError("averaged constant-term routes disagree")
    rec = qmod_recognize(four, F.weight())
    if not (rec - poly).is_zero():
        raise SeriesError("recognized constant term disagrees with residue route")
    return four, poly


def anomaly_residue_check(F: MEElement, qprec):
    """The derivative of the averaged constant term, by the residue formula:

        d/dC2 [F]_{p^0} = [d/dC2 F]_{p^0}
                          - sum_{a != b} [Res_{z_a = z_b}((w_a - w_b) F)]_{p^0}.

    Verified at the level of QMod polynomials; returns (lhs, rhs).
    """
    base = const_term_avg_residue(F)
    base_f = const_term_avg_fourier(F, qprec)
    if not base.evaluate(qprec).same_terms(base_f):
        raise SeriesError("constant-term routes disagree on the base element")
    lhs = base.ddc2()
    rhs = const_term_avg_residue(F.ddc2())
    labels = sorted(F.labels)
    for a in labels:
        for b in labels:
            if a == b:
                continue
            G = me_residue(F, a, b, times_omega=True)
            rhs = rhs - const_term_avg_residue(G)
    if not (lhs - rhs).is_zero():
        raise SeriesError(f"anomaly residue identity failed: {lhs} != {rhs}")
    return lhs, rhs
