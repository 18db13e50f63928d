"""The Igusa cusp form chi_10, the partition function Z = -1/chi_10, the
invariants N_{g,h,d}, and the closed-form reference series they specialize to.

chi_10 is computed by two independent pipelines:

* product: the Borcherds-type product p q qt * prod (1 - p^k q^h qt^d)^C(4hd-k^2)
  over h, d >= 0, (h,d) != (0,0) together with the k < 0 part of the
  (h,d) = (0,0) factor; the exponents C(n) are Fourier coefficients of the
  theta quotient (40 theta3^4 - 8 theta4^4)/(theta3 theta2^4), with
  C(n) = 0 for n <= -2.

* hecke: qt * phi_{-2,1}(y, q) * Delta(q) * exp(- sum_l qt^l (Z|V_l)(y, q))
  with Z = 2 phi_{0,1}, using the index-raising operators V_l.

Both pipelines exist in the Fourier variable y = -p and in the formal
variable w (where p = e^w), whose even coefficient rows convert to u-rows by
a sign per degree.  Agreement of the two pipelines monomial by monomial is
the module's central correctness oracle.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt

from .errors import PrecisionError, SeriesError
from .jacobi import SymYLaurent, hecke_V, phi_0_1_fourier, phi_m2_1_fourier, y_basis_fit
from .qmod import bernoulli, delta_series, eisenstein_series
from .series import INF_PREC, TruncatedSeries, w_to_u


# ----------------------------------------------------------------------
# Borcherds exponents from the theta quotient
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BorcherdsExponentTable:
    """Exponents C(n) of the product form; C(n) = 0 for n <= -2."""

    c: dict
    computed_through: int

    def __call__(self, n) -> int:
        if n <= -2:
            return 0
        if n > self.computed_through:
            raise PrecisionError(f"exponent table computed through {self.computed_through}, asked {n}")
        return self.c.get(n, 0)


@lru_cache(maxsize=None)
def borcherds_exponents(nmax) -> BorcherdsExponentTable:
    """Expand the theta quotient in the auxiliary variable Q with Q^4 = q.

    theta2 = 2 Q sum Q^(4n^2+4n), theta3/theta4 = sum (+-1)^n Q^(4n^2); the
    quotient's surviving exponents must all be divisible by 4.
    """
    if nmax < 0:
        raise SeriesError("need nmax >= 0")
    qprec = 4 * nmax + 13
    v = ("Q",)

    def theta(kind):
        terms = {}
        n = 0
        while True:
            if kind == 2:
                e = (2 * n + 1) ** 2
                coeff = 2
            else:
                e = 4 * n * n
                coeff = (1 if kind == 3 or n % 2 == 0 else -1) * (2 if n else 1)
            if e >= qprec:
                break
            terms[(e,)] = terms.get((e,), 0) + coeff
            n += 1
        return TruncatedSeries(v, terms, (qprec,), (0,))

    th2, th3, th4 = theta(2), theta(3), theta(4)
    num = (th3 ** 4).scale(40) - (th4 ** 4).scale(8)
    den = th3 * (th2 ** 4)
    quot = num * den.invert()
    table = {}
    for (e,), coeff in quot.items_sorted():
        if e % 4:
            raise SeriesError(f"theta quotient produced exponent {e} not divisible by 4")
        if coeff.denominator != 1:
            raise SeriesError(f"non-integral Borcherds exponent at {e}: {coeff}")
        table[e // 4] = int(coeff)
    through = (quot.prec[0] - 1) // 4
    return BorcherdsExponentTable(table, min(through, nmax) if nmax < through else through)


# ----------------------------------------------------------------------
# chi_10: product pipeline
# ----------------------------------------------------------------------


def _product_log_group(args):
    """Log contribution of one (h, d) factor group, as a sparse term dict.

    Variables are (x, q, qt) where x is either y (mode 'y') or w (mode 'w');
    in mode 'y' the monomial p^(jk) contributes (-1)^(jk) y^(jk), in mode
    'w' it contributes the truncated exponential row sum_t (jk)^t/t! w^t.
    """
    h, d, mode, qprec, qtprec, table, xwin = args
    terms = {}
    kmax = isqrt(4 * h * d + 1)
    for k in range(-kmax, kmax + 1):
        cexp = table(4 * h * d - k * k)
        if cexp == 0:
            continue
        j = 1
        while j * h < qprec and j * d < qtprec:
            base = Fraction(-cexp, j)
            if mode == "y":
                e = j * k
                if abs(e) <= xwin:
                    sign = -1 if e % 2 else 1
                    key = (e, j * h, j * d)
                    terms[key] = terms.get(key, Fraction(0)) + base * sign
            else:
                jk = j * k
                powv = Fraction(1)
                for t in range(xwin + 1):
                    if powv:
                        key = (t, j * h, j * d)
                        terms[key] = terms.get(key, Fraction(0)) + base * powv
                    powv = powv * jk / (t + 1)
            j += 1
    return {k: v for k, v in terms.items() if v}


def _chi10_product(mode, qprec, qtprec, xwin, threads=1) -> TruncatedSeries:
    table = borcherds_exponents(4 * (qprec - 1) * (qtprec - 1) + 1)
    groups = [
        (h, d, mode, qprec, qtprec, table, xwin)
        for h in range(qprec)
        for d in range(qtprec)
        if (h, d) != (0, 0)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_product_log_group, groups))
    else:
        parts = [_product_log_group(g) for g in groups]
    total = {}
    for part in parts:  # groups are in canonical (h, d) order
        for k, v in part.items():
            s = total.get(k, Fraction(0)) + v
            if s:
                total[k] = s
            else:
                total.pop(k, None)
    if mode == "y":
        vars = ("y", "q", "qt")
        logser = TruncatedSeries(vars, total, (xwin + 1, qprec, qtprec), (-xwin, 0, 0))
        pre = TruncatedSeries(
            vars, {(-1, 0, 0): -1, (0, 0, 0): -2, (1, 0, 0): -1}, (xwin + 1, qprec, qtprec), (-1, 0, 0)
        )
    else:
        vars = ("w", "q", "qt")
        logser = TruncatedSeries(vars, total, (xwin + 1, qprec, qtprec), (0, 0, 0))
        # p - 2 + 1/p = (e^(w/2) - e^(-w/2))^2 = 2 sum_{t>=1} w^(2t)/(2t)!
        pre_terms = {}
        t = 1
        while 2 * t <= xwin:
            pre_terms[(2 * t, 0, 0)] = Fraction(2, factorial(2 * t))
            t += 1
        pre = TruncatedSeries(vars, pre_terms, (xwin + 1, qprec, qtprec), (0, 0, 0))
    unit = logser.exp(grading_vars=("q", "qt")).tighten_floor(vars[0])
    out = (pre * unit).shift("q", 1).shift("qt", 1)
    return out.tighten_floor(vars[0])


# ----------------------------------------------------------------------
# chi_10: Hecke pipeline
# ----------------------------------------------------------------------


def _chi10_hecke_y(qprec, qtprec) -> TruncatedSeries:
    phi01 = phi_0_1_fourier(qprec * max(qtprec - 1, 1))
    zser = phi01.scale(2)
    vars = ("y", "q", "qt")
    arg = TruncatedSeries.zero(vars, (INF_PREC, qprec, qtprec), (0, 0, 0))
    for ell in range(1, qtprec):
        v = hecke_V(zser, ell, 0, qprec)
        v3 = v.promote(vars, {"qt": qtprec})
        arg = arg - v3.shift("qt", ell)
    unit = arg.exp(grading_vars=("qt",))
    phim2 = phi_m2_1_fourier(qprec).tighten_floor("y").promote(vars, {"qt": qtprec})
    delta = delta_series(qprec).truncate("q", qprec).promote(
        vars, {"y": INF_PREC, "qt": qtprec}
    )
    out = (phim2 * delta * unit).shift("qt", 1)
    return out.tighten_floor("y")


# ----------------------------------------------------------------------
# public chi_10 / Z surfaces
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def chi10_expand(method, qorder, qtorder, y_order=None, threads=1) -> TruncatedSeries:
    """(y, q, qt)-expansion of chi_10 with exponents through the given orders.

    The y-support of chi_10 through these orders is finite (every monomial
    satisfies |k| <= 2(h + d)), so the result is y-exact; ``y_order`` only
    needs to be supplied to widen the audit window.
    """
    qprec, qtprec = qorder + 2, qtorder + 2
    xwin = 2 * (qorder + qtorder) + 4
    if y_order is not None:
        xwin = max(xwin, y_order + 2)
    if method == "product":
        out = _chi10_product("y", qprec - 1, qtprec - 1, xwin, threads=threads)
    elif method == "hecke":
        out = _chi10_hecke_y(qprec - 1, qtprec - 1)
    else:
        raise SeriesError(f"unknown chi10 method {method!r}")
    out = out.truncate("q", qorder + 1).truncate("qt", qtorder + 1)
    iy = out.vars.index("y")
    for e in out.terms:
        if abs(e[iy]) > 2 * (e[1] + e[2]) + 1:
            raise SeriesError(f"chi10 support audit failed at {e}")
    if out.prec[iy] < INF_PREC:
        out = out.declare_exact("y")
    return out


def chi10_cross_check(qorder, qtorder, ywin, threads=1):
    """Compare the two pipelines monomial by monomial; return #coefficients."""
    a = chi10_expand("product", qorder, qtorder, ywin, threads=threads)
    b = chi10_expand("hecke", qorder, qtorder, ywin)
    checked = 0
    for r in range(-ywin, ywin + 1):
        for n in range(0, qorder + 1):
            for m in range(0, qtorder + 1):
                ca = a.coeff((r, n, m))
                cb = b.coeff((r, n, m))
                if ca != cb:
                    raise SeriesError(
                        f"chi10 pipelines disagree at y^{r} q^{n} qt^{m}: {ca} != {cb}"
                    )
                checked += 1
    return checked


@lru_cache(maxsize=None)
def chi10_expand_w(qorder, qtorder, wprec, threads=1) -> TruncatedSeries:
    """chi_10 in (w, q, qt) with w-coefficients through w^(wprec-1)."""
    return _chi10_product("w", qorder + 1, qtorder + 1, wprec - 1, threads=threads).truncate(
        "q", qorder + 1
    ).truncate("qt", qtorder + 1)


@lru_cache(maxsize=None)
def z_partition(qorder, qtorder, y_order, threads=1) -> TruncatedSeries:
    """Z = -1/chi_10 in (y, q, qt); q, qt exponents from -1, y-window finite."""
    margin = 3 * (qorder + qtorder) + 10
    for _ in range(3):
        chi = chi10_expand("product", qorder + 2, qtorder + 2, y_order + margin, threads=threads)
        chi = chi.truncate("y", y_order + margin + 1)
        z = -(chi.invert())
        iy = z.vars.index("y")
        if z.prec[iy] > y_order and z.prec[1] > qorder and z.prec[2] > qtorder:
            z = z.truncate("y", y_order + 1).truncate("q", qorder + 1).truncate("qt", qtorder + 1)
            return z.tighten_floor("y")
        margin = 2 * margin
    raise PrecisionError(f"partition function window too small: prec {z.prec}")


@lru_cache(maxsize=None)
def z_partition_w(qorder, qtorder, wprec, threads=1) -> TruncatedSeries:
    """Z = -1/chi_10 in (w, q, qt); the w-Laurent route to the invariants."""
    chi = chi10_expand_w(qorder + 2, qtorder + 2, wprec + 5, threads=threads)
    z = -(chi.invert())
    if z.prec[0] < wprec or z.prec[1] <= qorder or z.prec[2] <= qtorder:
        raise PrecisionError(f"w-route window too small: prec {z.prec}")
    return z.truncate("w", wprec).truncate("q", qorder + 1).truncate("qt", qtorder + 1)


# ----------------------------------------------------------------------
# the invariants N_{g,h,d}
# ----------------------------------------------------------------------


@dataclass
class PartitionTable:
    """Computed invariants N_{g,h,d} with their computation bounds."""

    values: dict = field(default_factory=dict)
    orders: tuple = (0, 0, 0)

    def get(self, g, h, d) -> Fraction:
        return self.values[(g, h, d)]


def gw_invariant(g, h, d, threads=1) -> Fraction:
    """N_{g,h,d} via the symmetric y-basis fit, cross-checked on the w-route.

    Route 1 fits the (q^(h-1), qt^(d-1)) slice of Z against the basis
    (y^(1/2)+y^(-1/2))^(2g'-2), g' <= h+d, and reads the u^(2g-2) row of the
    resulting u-expansion.  Route 2 reads the w^(2g-2) row of the w-form of
    Z and converts the sign.  Both must agree exactly.  The invariants are
    nonzero for arbitrarily large g (the basis elements have full
    u-expansions), so g is not bounded by h+d.
    """
    if g < 0 or h < 0 or d < 0:
        raise SeriesError("invariant indices must be >= 0")
    fit = z_slice_basis(h, d, threads=threads)
    uprec = max(2 * g - 1, 0) + 2
    useries = fit.to_u_series(uprec)
    n1 = useries.coeff((2 * g - 2,))
    zw = z_partition_w(h, d, max(2 * g - 1, 1) + 2, threads=threads)
    wrow = zw.coeff((2 * g - 2, h - 1, d - 1))
    n2 = wrow if (g - 1) % 2 == 0 else -wrow
    if n1 != n2:
        raise SeriesError(f"invariant extraction routes disagree at {(g, h, d)}: {n1} vs {n2}")
    return n1


@lru_cache(maxsize=None)
def z_slice_basis(h, d, threads=1) -> SymYLaurent:
    """Basis coefficients of the (q^(h-1), qt^(d-1)) slice of Z."""
    gmax = h + d
    nraw = 4 * (h + d) + 8
    rlo = -(h + d) - 1
    ywin = rlo + nraw
    z = z_partition(h, d, max(ywin + 1, 4), threads=threads)
    slice2 = z.extract("q", h - 1).extract("qt", d - 1)
    raw = {r: slice2.coeff((r,)) for r in range(rlo, rlo + nraw)}
    return y_basis_fit(raw, gmax)


def partition_table(gmax, hmax, dmax, threads=1) -> PartitionTable:
    table = PartitionTable(orders=(gmax, hmax, dmax))
    for h in range(hmax + 1):
        for d in range(dmax + 1):
            for g in range(min(gmax, h + d) + 1):
                table.values[(g, h, d)] = gw_invariant(g, h, d, threads=threads)
    return table


# ----------------------------------------------------------------------
# reference series
# ----------------------------------------------------------------------


def _sigma_frac(n, e) -> Fraction:
    return sum((Fraction(1, a) ** e for a in range(1, n + 1) if n % a == 0), Fraction(0))


def reference_series(which, n_prec, **params):
    """Exact expansions of the classical closed forms.

    yau_zaslow: 1/Delta with q-exponents from -1 (series in q).
    kkv: the genus/degree-0 product in (w, q) (param wprec) or (y, q)
         (param ywin).
    toda_fg: fiber-class potentials; returns {"eX": series, "eB": series}
         for the formal Euler characteristics (param g).
    k3_genus1: {"tau1_F": 2 C2/Delta, "tau1_W": q d/dq of it}.
    """
    if which == "yau_zaslow":
        return delta_series(n_prec + 2).truncate("q", n_prec + 2).invert().truncate("q", n_prec)
    if which == "kkv":
        return _kkv_series(n_prec, **params)
    if which == "toda_fg":
        return _toda_fg(params["g"], n_prec)
    if which == "k3_genus1":
        tau1_f = (
            eisenstein_series(2, n_prec + 2) * delta_series(n_prec + 2).truncate("q", n_prec + 2).invert()
        ).scale(2)
        return {"tau1_F": tau1_f, "tau1_W": tau1_f.derive("q")}
    raise SeriesError(f"unknown reference series {which!r}")


def _kkv_series(qorder, wprec=None, ywin=None) -> TruncatedSeries:
    """-q^-1/(p-2+1/p) * prod 1/((1-p q^m)^2 (1-q^m)^20 (1-1/p q^m)^2).

    The genus/degree specialization of the partition function.  The overall
    -q^-1 normalizes the product so that the leading invariant at
    (g, h) = (0, 0) equals +1 (in the u-expansion the pole term is
    +u^-2 q^-1); the series is then directly comparable with the qt^(-1)
    slice of Z.
    """
    if (wprec is None) == (ywin is None):
        raise SeriesError("kkv needs exactly one of wprec/ywin")
    qprec = qorder + 2
    if wprec is not None:
        vars = ("w", "q")
        xwin = wprec + 3
        # -log of the product: rows (2 e^(jw) + 20 + 2 e^(-jw)) q^(jm) / j
        terms = {}
        for m in range(1, qprec):
            j = 1
            while j * m < qprec:
                base = Fraction(1, j)
                powp = Fraction(1)  # j^t / t!
                for t in range(xwin + 1):
                    c = base * 24 if t == 0 else base * powp * (4 if t % 2 == 0 else 0)
                    if c:
                        key = (t, j * m)
                        terms[key] = terms.get(key, Fraction(0)) + c
                    powp = powp * j / (t + 1)
                j += 1
        logser = TruncatedSeries(vars, terms, (xwin + 1, qprec), (0, 0))
        unit = logser.exp(grading_vars=("q",))
        t = 1
        sinh2 = {}
        while 2 * t <= xwin:
            sinh2[(2 * t, 0)] = Fraction(2, factorial(2 * t))
            t += 1
        pole = TruncatedSeries(vars, sinh2, (xwin + 1, qprec), (2, 0)).invert()
        out = -(pole * unit).shift("q", -1)
        return out.truncate("w", wprec).truncate("q", qorder + 1)
    vars = ("y", "q")
    xwin = ywin + 2 * qprec + 2
    # log of the inverted product: rows (2(-y)^j + 20 + 2(-1/y)^j) q^(jm) / j
    terms = {}
    for m in range(1, qprec):
        j = 1
        while j * m < qprec:
            base = Fraction(1, j)
            sgn = -1 if j % 2 else 1
            for e in (j, -j):
                if abs(e) <= xwin:
                    key = (e, j * m)
                    terms[key] = terms.get(key, Fraction(0)) + 2 * sgn * base
            key = (0, j * m)
            terms[key] = terms.get(key, Fraction(0)) + 20 * base
            j += 1
    logser = TruncatedSeries(vars, terms, (xwin + 1, qprec), (-xwin, 0))
    unit = logser.exp(grading_vars=("q",)).tighten_floor("y")
    pole = TruncatedSeries(
        vars, {(1, 0): -1, (0, 0): -2, (-1, 0): -1}, (xwin + 1, qprec), (-1, 0)
    ).invert()
    out = -(pole * unit).shift("q", -1)
    return out.truncate("y", ywin + 1).truncate("q", qorder + 1)


def _toda_fg(g, n_prec):
    if g == 0:
        terms = {(n,): -_sigma_frac(n, 3) for n in range(1, n_prec)}
        ex = TruncatedSeries(("q",), terms, (n_prec,), (0,))
        eb = TruncatedSeries.zero(("q",), (n_prec,))
        return {"eX": ex, "eB": eb}
    if g == 1:
        s = TruncatedSeries(("q",), {(n,): _sigma_frac(n, 1) for n in range(1, n_prec)}, (n_prec,), (0,))
        return {"eX": s.scale(Fraction(-1, 12)), "eB": s}
    coeff = Fraction((-1) ** g) * bernoulli(2 * g) / (4 * g)
    return {
        "eX": eisenstein_series(2 * g - 2, n_prec).scale(coeff),
        "eB": TruncatedSeries.zero(("q",), (n_prec,)),
    }
