"""The Jacobi theta function, the Weierstrass function and its derivatives,
and the logarithmic-derivative function A, in two presentations each.

Fourier presentation: (p, q)-expansions valid in the region 0 < |q| < |p| < 1,
as :class:`~chi10.series.TruncatedSeries`.  Taylor/Laurent presentation:
expansions around the elliptic origin with quasimodular coefficients, as
:class:`LaurentQMod`.

Two related expansion variables are used.  In the variable w the derivative
operator is d/dw (equal to p d/dp on the Fourier side), and

    wp      = 1/w^2 + sum_{r>=2} (2r-1)(2r) C_{2r} w^{2r-2}
    A       = 1/w   - sum_{l>=1} 2l C_{2l} w^{2l-1}

while the variable u = w/i carries the theta function

    Theta   = u * exp( sum_{k>=1} (-1)^(k-1) C_{2k} u^{2k} ).

Every coefficient is rational in both variables for the functions exposed
here; conversion between even series in w and u is a sign flip per degree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import SeriesError
from .qmod import QModPolynomial, eisenstein_as_modular
from .series import INF_PREC, TruncatedSeries


def eis_poly(k) -> QModPolynomial:
    """C_k as a QMod polynomial (the generator for k <= 6, else modular)."""
    if k == 2:
        return QModPolynomial.generator(2)
    return eisenstein_as_modular(k)


class LaurentQMod:
    """Laurent series in one formal variable with QMod coefficients."""

    __slots__ = ("var", "terms", "prec")

    def __init__(self, var, terms, prec):
        if var not in ("w", "u"):
            raise SeriesError("LaurentQMod variable must be w or u")
        clean = {}
        for e, p in terms.items():
            if p.is_zero():
                continue
            if e >= prec:
                raise SeriesError(f"exponent {e} at/above precision {prec}")
            clean[int(e)] = p
        self.var = var
        self.terms = clean
        self.prec = int(prec)

    @classmethod
    def zero(cls, var, prec):
        return cls(var, {}, prec)

    def floor(self) -> int:
        return min(self.terms, default=0)

    def coeff(self, e) -> QModPolynomial:
        if e >= self.prec:
            raise SeriesError(f"coefficient {e} beyond precision {self.prec}")
        return self.terms.get(e, QModPolynomial.zero())

    def items_sorted(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return (
            isinstance(other, LaurentQMod)
            and self.var == other.var
            and self.terms == other.terms
            and self.prec == other.prec
        )

    def __repr__(self):
        lines = ", ".join(f"{self.var}^{e}: {p}" for e, p in self.items_sorted())
        return f"LaurentQMod({lines}; prec {self.prec})"

    def __add__(self, other):
        if self.var != other.var:
            raise SeriesError("variable mismatch")
        prec = min(self.prec, other.prec)
        terms = dict(self.terms)
        for e, p in other.terms.items():
            terms[e] = terms.get(e, QModPolynomial.zero()) + p
        terms = {e: p for e, p in terms.items() if e < prec and not p.is_zero()}
        return LaurentQMod(self.var, terms, prec)

    def __neg__(self):
        return LaurentQMod(self.var, {e: -p for e, p in self.terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LaurentQMod(self.var, {e: p * c for e, p in self.terms.items()}, self.prec)

    def mul_poly(self, poly: QModPolynomial):
        return LaurentQMod(self.var, {e: p * poly for e, p in self.terms.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, QModPolynomial):
            return self.mul_poly(other)
        if self.var != other.var:
            raise SeriesError("variable mismatch")
        fa, fb = self.floor(), other.floor()
        prec = min(self.prec + fb, other.prec + fa)
        terms = {}
        for ea, pa in self.terms.items():
            for eb, pb in other.terms.items():
                e = ea + eb
                if e >= prec:
                    continue
                terms[e] = terms.get(e, QModPolynomial.zero()) + pa * pb
        return LaurentQMod(self.var, terms, prec)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise SeriesError("LaurentQMod has no inverse operation")
        if n == 0:
            return LaurentQMod(self.var, {0: QModPolynomial.const(1)}, self.prec)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def derive(self):
        """d/d(var): exponent e contributes e * coeff to exponent e - 1."""
        terms = {e - 1: p * e for e, p in self.terms.items() if e != 0}
        return LaurentQMod(self.var, terms, self.prec - 1)

    def ddc2(self):
        return LaurentQMod(self.var, {e: p.ddc2() for e, p in self.terms.items()}, self.prec)

    def shift(self, k):
        return LaurentQMod(self.var, {e + k: p for e, p in self.terms.items()}, self.prec + k)

    def parity(self):
        """+1 if only even exponents occur, -1 if only odd, None if mixed."""
        pars = {e % 2 for e in self.terms}
        if len(pars) > 1:
            return None
        if not pars:
            return 1
        return 1 if pars == {0} else -1

    def to_u(self):
        """Convert an even series in w to u = w/i (sign (-1)^j at w^(2j))."""
        if self.var != "w" or self.parity() == -1:
            raise SeriesError("to_u needs an even series in w")
        terms = {e: (p if (e // 2) % 2 == 0 else -p) for e, p in self.terms.items()}
        return LaurentQMod("u", terms, self.prec)

    def to_w(self):
        if self.var != "u" or self.parity() == -1:
            raise SeriesError("to_w needs an even series in u")
        terms = {e: (p if (e // 2) % 2 == 0 else -p) for e, p in self.terms.items()}
        return LaurentQMod("w", terms, self.prec)

    def evaluate_q(self, qprec) -> TruncatedSeries:
        """Expand every coefficient as a q-series; result in (var, q)."""
        terms = {}
        for e, p in self.terms.items():
            s = p.evaluate(qprec)
            for (n,), c in s.terms.items():
                terms[(e, n)] = c
        f = self.floor()
        out_vars = (self.var, "q")
        return TruncatedSeries(out_vars, terms, (self.prec, qprec), (f, 0))


# ----------------------------------------------------------------------
# Taylor/Laurent presentations
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def wp_w(k, wprec) -> LaurentQMod:
    """The k-th derivative of the Weierstrass function as a w-Laurent series.

    Pole part (-1)^k (k+1)!/w^(k+2); the w^j coefficient has weight j+k+2.
    """
    if k < 0:
        raise SeriesError("derivative order must be >= 0")
    terms = {-2: QModPolynomial.const(1)}
    r = 2
    while 2 * r - 2 < wprec + k:
        terms[2 * r - 2] = eis_poly(2 * r) * ((2 * r - 1) * 2 * r)
        r += 1
    out = LaurentQMod("w", terms, wprec + k)
    for _ in range(k):
        out = out.derive()
    return out


@lru_cache(maxsize=None)
def wp_plus_2c2_w(wprec) -> LaurentQMod:
    """wp + 2*C2, the balanced combination entering the graph sums."""
    c2 = LaurentQMod("w", {0: QModPolynomial.generator(2) * 2}, wprec)
    return wp_w(0, wprec) + c2


@lru_cache(maxsize=None)
def afun_w(wprec) -> LaurentQMod:
    """A = 1/w - sum_{l>=1} 2l C_{2l} w^(2l-1); odd, residue 1 at w = 0."""
    terms = {-1: QModPolynomial.const(1)}
    ell = 1
    while 2 * ell - 1 < wprec:
        terms[2 * ell - 1] = eis_poly(2 * ell) * (-2 * ell)
        ell += 1
    return LaurentQMod("w", terms, wprec)


@lru_cache(maxsize=None)
def wp_u(k, uprec) -> LaurentQMod:
    """Derivatives of the Weierstrass function in the u variable.

    Only even derivative orders stay rational in u; odd ones live in w.
    """
    if k % 2:
        raise SeriesError("odd wp-derivatives are not rational in u; use wp_w")
    return wp_w(k, uprec).to_u()


@lru_cache(maxsize=None)
def theta_u(uprec) -> LaurentQMod:
    """Theta = u exp(sum (-1)^(k-1) C_{2k} u^(2k)), an odd series in u.

    Satisfies d/dC2 Theta = u^2 Theta.
    """
    arg = {}
    k = 1
    while 2 * k < uprec:
        sign = 1 if (k - 1) % 2 == 0 else -1
        arg[2 * k] = eis_poly(2 * k) * sign
        k += 1
    argser = LaurentQMod("u", arg, uprec)
    # exp of an even series with positive valuation, by plain powers
    out = LaurentQMod("u", {0: QModPolynomial.const(1)}, uprec)
    power = LaurentQMod("u", {0: QModPolynomial.const(1)}, uprec)
    j = 1
    while 2 * j < uprec:
        power = power * argser
        out = out + power.scale(Fraction(1, factorial(j)))
        j += 1
    return out.shift(1)


def theta_sq_u(uprec) -> LaurentQMod:
    """Theta^2 in the u variable (even, leading term u^2)."""
    t = theta_u(uprec + 1)
    return (t * t)


# ----------------------------------------------------------------------
# Fourier presentations
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def wp_fourier(k, qprec, pmax=None) -> TruncatedSeries:
    """(p, q)-expansion of the k-th Weierstrass derivative.

    wp = 1/12 + p/(1-p)^2 + sum_{d>=1} sum_{j|d} j (p^j - 2 + p^-j) q^d in
    the region 0 < |q| < |p| < 1; the q^0 row carries the infinite tail
    sum_{m>=1} m p^m, truncated at ``pmax`` (default qprec).  Derivatives act
    as p d/dp.
    """
    if pmax is None:
        pmax = qprec
    pmin = -(qprec - 1) if qprec > 1 else 0
    terms = {(0, 0): Fraction(1, 12)}
    for m in range(1, pmax + 1):
        terms[(m, 0)] = Fraction(m)
    for d in range(1, qprec):
        for j in range(1, d + 1):
            if d % j:
                continue
            if j <= pmax:
                terms[(j, d)] = terms.get((j, d), Fraction(0)) + j
            terms[(0, d)] = terms.get((0, d), Fraction(0)) - 2 * j
            terms[(-j, d)] = terms.get((-j, d), Fraction(0)) + j
    out = TruncatedSeries(("p", "q"), {e: c for e, c in terms.items() if c}, (pmax + 1, qprec), (min(pmin, 0), 0))
    for _ in range(k):
        out = out.derive("p")
    return out


@lru_cache(maxsize=None)
def afun_fourier(qprec, pmax=None) -> TruncatedSeries:
    """(p, q)-expansion of A = -1/2 - sum_{m != 0} p^m / (1 - q^m)."""
    if pmax is None:
        pmax = qprec
    terms = {(0, 0): Fraction(-1, 2)}
    for m in range(1, pmax + 1):
        for j in range(0, (qprec - 1) // m + 1):
            terms[(m, j * m)] = Fraction(-1)
    for m in range(1, qprec):
        for j in range(1, (qprec - 1) // m + 1):
            terms[(-m, j * m)] = Fraction(1)
    pmin = -(qprec - 1) if qprec > 1 else 0
    return TruncatedSeries(("p", "q"), terms, (pmax + 1, qprec), (min(pmin, 0), 0))


@lru_cache(maxsize=None)
def theta_fourier(qprec) -> TruncatedSeries:
    """Fourier form of Theta with half-integer p-exponents stored doubled.

    The stored exponent 2e represents p^e; the q^0 row is p^(1/2) - p^(-1/2),
    stored as exponents +1 and -1.  Equals (p^(1/2) - p^(-1/2)) *
    prod (1-p q^m)(1-p^(-1) q^m)/(1-q^m)^2.  Note the product form squares to
    the negative of the square of the u-Taylor form ``theta_u``.
    """
    vars = ("p", "q")
    prec = (INF_PREC, qprec)
    out = TruncatedSeries(vars, {(1, 0): 1, (-1, 0): -1}, prec, (-1, 0))
    denom = TruncatedSeries.constant(vars, 1, prec, (0, 0))
    for m in range(1, qprec):
        out = out * TruncatedSeries(vars, {(0, 0): 1, (2, m): -1}, prec, (0, 0))
        out = out * TruncatedSeries(vars, {(0, 0): 1, (-2, m): -1}, prec, (-2, 0))
        denom = denom * TruncatedSeries(vars, {(0, 0): 1, (0, m): -1}, prec, (0, 0))
    return out * (denom.invert() ** 2)
