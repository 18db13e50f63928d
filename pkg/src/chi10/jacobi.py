"""The bigraded ring J = Q[C4, C6, phi_{-2,1}, phi_{0,1}] of weak Jacobi
forms of even weight, with Fourier expansions in (y, q) where y = -p.

Conventions.  phi_{-2,1} is the square of the product form of the theta
function, with q^0 row -(y + 2 + 1/y); phi_{0,1} = 12 * phi_{-2,1} * wp.
In the u-Taylor picture phi_{-2,1} equals minus the square of the u-form
theta series, so its u-expansion starts with -u^2.  Under this convention
the index-m elliptic transformation law reads, as an identity of (y, q)
power series expanded in 0 < |q| < |y| < 1,

    phi(y^{-1} q, q) = y^{2m} q^{-m} phi(y, q).

Fourier coefficients c(n, r) of a weak Jacobi form of index m vanish unless
r^2 <= 4nm + m^2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .elliptic import LaurentQMod, theta_u, wp_fourier, wp_u
from .errors import PrecisionError, RecognitionError, SeriesError
from .linalg import solve_overdetermined
from .qmod import QModPolynomial, delta_series
from .series import INF_PREC, TruncatedSeries, fmt_fraction


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def phi_m2_1_fourier(qprec) -> TruncatedSeries:
    """phi_{-2,1} in (y, q): -(y+2+1/y) * prod (1+yq^m)^2 (1+q^m/y)^2 / (1-q^m)^4."""
    vars = ("y", "q")
    prec = (INF_PREC, qprec)
    out = TruncatedSeries(vars, {(1, 0): -1, (0, 0): -2, (-1, 0): -1}, prec, (-1, 0))
    denom = TruncatedSeries.constant(vars, 1, prec, (0, 0))
    for m in range(1, qprec):
        f1 = TruncatedSeries(vars, {(0, 0): 1, (1, m): 1}, prec, (0, 0))
        f2 = TruncatedSeries(vars, {(0, 0): 1, (-1, m): 1}, prec, (-1, 0))
        out = out * (f1 * f1) * (f2 * f2)
        g = TruncatedSeries(vars, {(0, 0): 1, (0, m): -1}, prec, (0, 0))
        denom = denom * (g * g)
    return out * (denom.invert() ** 2)


@lru_cache(maxsize=None)
def wp_fourier_y(qprec, pmax=None) -> TruncatedSeries:
    """The Weierstrass function in (y, q) via the substitution p -> -y.

    The q^0 tail sum m p^m is infinite, so the y-precision is finite here.
    """
    wp = wp_fourier(0, qprec, pmax=pmax if pmax is not None else qprec + 2)
    return wp.negate_var("p").rename_var("p", "y")


@lru_cache(maxsize=None)
def phi_0_1_fourier(qprec) -> TruncatedSeries:
    """phi_{0,1} = 12 * phi_{-2,1} * wp; q^0 row is 10 - y - 1/y.

    The Weierstrass tail is truncated, but phi_{0,1} is a weak Jacobi form
    of index 1, so its true support obeys r^2 <= 4n + 1.  The product is
    computed on a window provably covering that support, the support bound
    is verified on the window, and the result is then marked y-exact.
    """
    phim2 = phi_m2_1_fourier(qprec).tighten_floor("y")
    wp = wp_fourier_y(qprec, pmax=2 * qprec + 4)
    prod = (phim2 * wp).scale(12)
    iy = prod.vars.index("y")
    for n in range(qprec):
        need = isqrt(4 * n + 1)
        if prod.prec[iy] <= need or prod.floor[iy] > -need:
            raise PrecisionError("window too small to certify index-1 support")
    viol = jacobi_support_violation(prod, 1)
    if viol is not None:
        raise RecognitionError(f"index-1 support violated at {viol}", witness=viol)
    return prod.declare_exact("y")


@lru_cache(maxsize=None)
def phi_m2_1_utaylor(uprec) -> LaurentQMod:
    """u-Taylor form of phi_{-2,1}: minus the square of the theta series."""
    t = theta_u(uprec + 1)
    return -(t * t)


@lru_cache(maxsize=None)
def phi_0_1_utaylor(uprec) -> LaurentQMod:
    return (phi_m2_1_utaylor(uprec + 2) * wp_u(0, uprec + 2)).scale(12)


def jacobi_generators(which, form, precision):
    """Fourier or u-Taylor expansion of the two index-1 generators."""
    table = {
        ("phi_m2_1", "fourier"): phi_m2_1_fourier,
        ("phi_0_1", "fourier"): phi_0_1_fourier,
        ("phi_m2_1", "utaylor"): phi_m2_1_utaylor,
        ("phi_0_1", "utaylor"): phi_0_1_utaylor,
    }
    try:
        fn = table[(which, form)]
    except KeyError:
        raise SeriesError(f"unknown generator/form {which}/{form}") from None
    return fn(precision)


# ----------------------------------------------------------------------
# polynomials in the generators
# ----------------------------------------------------------------------


def _mono_weight_index(e):
    a, b, c, d = e
    return 4 * a + 6 * b - 2 * c, c + d


class JacobiPolynomial:
    """Polynomial in (C4, C6, phi_{-2,1}, phi_{0,1}); bigraded.

    Keys are exponent 4-tuples (a, b, c, d); weight 4a+6b-2c, index c+d.
    """

    __slots__ = ("terms", "weight", "index")

    def __init__(self, terms, weight=None, index=None):
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != 4 or any(x < 0 for x in e):
                raise SeriesError(f"bad Jacobi exponents {e}")
            w, m = _mono_weight_index(e)
            if weight is not None and w != weight:
                raise SeriesError(f"monomial {e} violates weight {weight}")
            if index is not None and m != index:
                raise SeriesError(f"monomial {e} violates index {index}")
            clean[e] = c
        self.terms = clean
        self.weight = weight
        self.index = index

    @classmethod
    def zero(cls, weight=None, index=None):
        return cls({}, weight, index)

    def __eq__(self, other):
        return isinstance(other, JacobiPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        w = self.weight if self.weight == other.weight else None
        m = self.index if self.index == other.index else None
        return JacobiPolynomial(terms, w, m)

    def __neg__(self):
        return JacobiPolynomial({e: -c for e, c in self.terms.items()}, self.weight, self.index)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return JacobiPolynomial({e: v * Fraction(c) for e, v in self.terms.items()}, self.weight, self.index)

    def evaluate(self, qprec) -> TruncatedSeries:
        return jacobi_evaluate(self, qprec)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = ("C4", "C6", "phi_m2_1", "phi_0_1")
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                (f"{n}^{x}" if x > 1 else n) for n, x in zip(names, e) if x
            ) or "1"
            parts.append(f"({fmt_fraction(c)})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json_obj(self):
        return {
            "weight": self.weight,
            "index": self.index,
            "terms": [{"e": list(e), "c": fmt_fraction(c)} for e, c in sorted(self.terms.items())],
        }


@lru_cache(maxsize=None)
def jacobi_basis(weight, index):
    """Monomial exponents (a, b, c, d) of given weight and index, sorted."""
    out = []
    for c in range(index + 1):
        d = index - c
        rest = weight + 2 * c
        if rest < 0:
            continue
        for a in range(rest // 4 + 1):
            r2 = rest - 4 * a
            if r2 % 6 == 0:
                out.append((a, r2 // 6, c, d))
    return tuple(sorted(out))


def jacobi_dim(weight, index) -> int:
    if weight % 2 or index < 0:
        return 0
    return len(jacobi_basis(weight, index))


@lru_cache(maxsize=None)
def _mono_fourier(e, qprec) -> TruncatedSeries:
    a, b, c, d = e
    from .qmod import eisenstein_series

    vars = ("y", "q")
    out = TruncatedSeries.constant(vars, 1, (INF_PREC, qprec), (0, 0))
    if a:
        out = out * eisenstein_series(4, qprec).promote(vars, {"y": INF_PREC}) ** a
    if b:
        out = out * eisenstein_series(6, qprec).promote(vars, {"y": INF_PREC}) ** b
    if c:
        out = out * phi_m2_1_fourier(qprec) ** c
    if d:
        out = out * phi_0_1_fourier(qprec) ** d
    return out


def jacobi_evaluate(p: JacobiPolynomial, qprec) -> TruncatedSeries:
    """(y, q)-expansion of a Jacobi polynomial, exact through q^(qprec-1).

    Pure phi-monomials are y-exact; any phi_{0,1} factor carries the
    truncated Weierstrass tail, so the result's y-precision is finite
    whenever d > 0 for some monomial.
    """
    out = None
    for e, coeff in sorted(p.terms.items()):
        s = _mono_fourier(e, qprec).scale(coeff)
        out = s if out is None else out + s
    if out is None:
        return TruncatedSeries.zero(("y", "q"), (INF_PREC, qprec), (0, 0))
    return out


def jacobi_support_violation(s: TruncatedSeries, m):
    """First stored coefficient violating r^2 <= 4nm + m^2, or None."""
    iy = s.vars.index("y")
    iq = s.vars.index("q")
    for e in sorted(s.terms):
        r, n = e[iy], e[iq]
        if r * r > 4 * n * m + m * m:
            return (n, r)
    return None


def jacobi_recognize(s: TruncatedSeries, weight, index, surplus=4) -> JacobiPolynomial:
    """Recognize a (y, q)-series as an element of J_{weight, index}.

    All available Fourier coefficients are matched; at least
    ``dim + surplus`` usable q-orders are required.  The y-window of ``s``
    must cover [-index-2, index+2] at every used q-order.
    """
    if set(s.vars) != {"y", "q"}:
        raise SeriesError("recognition expects a series in (y, q)")
    viol = jacobi_support_violation(s, index)
    if viol is not None:
        raise RecognitionError(
            f"coefficient support violates index {index} at (n, r) = {viol}",
            witness=viol,
        )
    basis = jacobi_basis(weight, index)
    if not basis:
        if s.is_zero():
            return JacobiPolynomial.zero(weight, index)
        raise RecognitionError(f"J has no elements of weight {weight}, index {index}")
    dim = len(basis)
    iy, iq = s.vars.index("y"), s.vars.index("q")
    qprec = s.prec[iq]
    if qprec < dim + surplus:
        raise PrecisionError(
            f"need q-precision >= {dim + surplus} to recognize in J_{weight},{index}"
        )
    cols = [_mono_fourier(e, qprec) for e in basis]
    ylo = max([s.floor[iy]] + [c.floor[0] for c in cols])
    yhi_s = s.prec[iy] - 1
    rows, rhs, labels = [], [], []
    for n in range(qprec):
        rmax = isqrt(4 * n * index + index * index)
        for r in range(-rmax, rmax + 1):
            if r < ylo or r > min(yhi_s, min(c.prec[0] - 1 for c in cols)):
                continue
            rows.append([c.coeff((r, n)) for c in cols])
            rhs.append(s.coeff((r, n) if iy < iq else (n, r)))
            labels.append((n, r))
    if len(rows) < dim + surplus:
        raise PrecisionError("y-window too narrow for recognition")
    sol = solve_overdetermined(rows, rhs, labels=labels)
    return JacobiPolynomial({e: c for e, c in zip(basis, sol)}, weight, index)


# ----------------------------------------------------------------------
# elliptic transformation law
# ----------------------------------------------------------------------


def jacobi_elliptic_law_check(s: TruncatedSeries, m, qshift=0):
    """Verify s(y^{-1} q, q) = y^{2m} q^{-m+qshift} s(y, q) coefficientwise.

    ``m`` may be negative (e.g. -1 for 1/phi_{-2,1}); ``qshift`` covers
    twisted objects whose law carries an extra power of q.  Returns the
    number of verified coefficients; raises RecognitionError with a witness
    on the first failure.
    """
    if set(s.vars) != {"y", "q"}:
        raise SeriesError("elliptic law check expects a series in (y, q)")
    iy, iq = s.vars.index("y"), s.vars.index("q")

    def known(r, n):
        # coefficients below the floor are known zeros
        return r < s.prec[iy] and n < s.prec[iq]

    def coeff(r, n):
        key = (r, n) if iy < iq else (n, r)
        return s.terms.get(key, Fraction(0))

    ymin = min((e[iy] for e in s.terms), default=0)
    ymax = max((e[iy] for e in s.terms), default=0)
    checked = 0
    qpow = -m + qshift
    for R in range(ymin - 1, ymax + 2):
        for N in range(s.floor[iq], s.prec[iq]):
            # y^r q^n -> y^-r q^(n+r), so [T s](R, N) = c(N + R, -R)
            r1, n1 = -R, N + R
            r2, n2 = R - 2 * m, N - qpow
            if not (known(r1, n1) and known(r2, n2)):
                continue
            lhs = coeff(r1, n1)
            rhs = coeff(r2, n2)
            if lhs != rhs:
                raise RecognitionError(
                    f"elliptic law fails at y^{R} q^{N}: {lhs} != {rhs}",
                    witness=(R, N),
                )
            checked += 1
    return checked


# ----------------------------------------------------------------------
# Hecke operators
# ----------------------------------------------------------------------


def hecke_V(s: TruncatedSeries, ell, weight, out_qprec) -> TruncatedSeries:
    """The index-raising Hecke operator V_ell on Fourier coefficients.

    In the untwisted elliptic variable p = -y the coefficients transform by

        c_ell(n, r) = sum_{a | gcd(n, r, ell)} a^(weight-1) c(n ell/a^2, r/a),

    with a^(-1) an honest rational for weight 0.  The divisor sum lives in
    p-coordinates; input and output are stored in (y, q), so the sign twist
    y = -p is applied on the way in and out.  The input must be known
    through q^(out_qprec * ell - 1).
    """
    if ell < 1:
        raise SeriesError("Hecke operator needs ell >= 1")
    if set(s.vars) != {"y", "q"}:
        raise SeriesError("Hecke operator expects a series in (y, q)")
    s = s.negate_var("y")
    iy, iq = s.vars.index("y"), s.vars.index("q")
    if s.prec[iq] < out_qprec * ell:
        raise PrecisionError(
            f"V_{ell} to q-order {out_qprec} needs input q-precision {out_qprec * ell}"
        )
    if s.floor[iq] < 0:
        raise SeriesError("Hecke operator expects q-floor >= 0")

    def coeff(n, r):
        if r < s.floor[iy] or r >= s.prec[iy]:
            return Fraction(0)
        key = (r, n) if iy < iq else (n, r)
        return s.terms.get(key, Fraction(0))

    # output support: r = a*r' with input coefficient at (n*ell/a^2, r')
    smin = min((e[iy] for e in s.terms), default=0)
    smax = max((e[iy] for e in s.terms), default=0)
    ylo, yhi = smin * ell, smax * ell
    if s.prec[iy] < INF_PREC // 2:
        yhi = min(yhi, (s.prec[iy] - 1) * ell)
    terms = {}
    for n in range(out_qprec):
        for r in range(ylo, yhi + 1):
            g = gcd(gcd(n, abs(r)), ell)
            if g == 0:
                g = ell
            total = Fraction(0)
            for a in range(1, g + 1):
                if g % a:
                    continue
                total += Fraction(a) ** (weight - 1) * coeff(n * ell // (a * a), r // a)
            if total:
                terms[(r, n)] = total
    yprec_out = INF_PREC if s.prec[iy] >= INF_PREC // 2 else s.prec[iy]
    out = TruncatedSeries(("y", "q"), terms, (yprec_out, out_qprec), (ylo, 0))
    return out.negate_var("y")


# ----------------------------------------------------------------------
# the symmetric y-basis (y^(1/2) + y^(-1/2))^(2g-2)
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def ybasis_element(g, yprec) -> TruncatedSeries:
    """(y^(1/2)+y^(-1/2))^(2g-2) as a y-series (g = 0 expands y/(1+y)^2)."""
    if g < 0:
        raise SeriesError("genus must be >= 0")
    if g == 0:
        terms = {(m,): Fraction((-1) ** (m - 1) * m) for m in range(1, yprec)}
        return TruncatedSeries(("y",), terms, (yprec,), (1,))
    base = TruncatedSeries(("y",), {(1,): 1, (0,): 2, (-1,): 1}, (yprec,), (-1,))
    return base ** (g - 1)


class SymYLaurent:
    """Finite combination sum_g c_g (y^(1/2)+y^(-1/2))^(2g-2)."""

    __slots__ = ("coeffs", "raw")

    def __init__(self, coeffs, raw=None):
        self.coeffs = {int(g): Fraction(c) for g, c in coeffs.items() if c}
        self.raw = raw

    def __eq__(self, other):
        return isinstance(other, SymYLaurent) and self.coeffs == other.coeffs

    def __repr__(self):
        inner = ", ".join(f"{g}: {fmt_fraction(c)}" for g, c in sorted(self.coeffs.items()))
        return f"SymYLaurent({{{inner}}})"

    def to_y_series(self, yprec) -> TruncatedSeries:
        out = TruncatedSeries.zero(("y",), (yprec,), (min([-(g - 1) for g in self.coeffs] + [0]),))
        for g, c in sorted(self.coeffs.items()):
            out = out + ybasis_element(g, yprec).scale(c)
        return out

    def to_u_series(self, uprec) -> TruncatedSeries:
        """sum c_g s(u)^(2g-2) with s = -2 sin(u/2), as an even u-series."""
        out = TruncatedSeries.zero(("u",), (uprec,), (-2,))
        s2 = sin_half_squared_times4(uprec + 4)
        s2inv = None
        for g, c in sorted(self.coeffs.items()):
            if g == 0:
                if s2inv is None:
                    s2inv = s2.invert()
                term = s2inv
            else:
                term = s2 ** (g - 1)
            out = out + term.truncate("u", min(uprec, term.prec[0])).scale(c)
        return out


@lru_cache(maxsize=None)
def sin_half_squared_times4(uprec) -> TruncatedSeries:
    """4 sin^2(u/2) = 2 - 2 cos u = u^2 - u^4/12 + ...; equals s(u)^2."""
    from math import factorial

    terms = {}
    j = 1
    while 2 * j < uprec:
        terms[(2 * j,)] = Fraction(2 * (-1) ** (j + 1), factorial(2 * j))
        j += 1
    return TruncatedSeries(("u",), terms, (uprec,), (2,))


def y_basis_fit(raw_coeffs, gmax, surplus=4) -> SymYLaurent:
    """Solve for c_g from raw y-coefficients {r: value}.

    ``raw_coeffs`` must overdetermine the g <= gmax unknowns by at least
    ``surplus`` rows; all rows are verified (mismatch raises).
    """
    rs = sorted(raw_coeffs)
    if len(rs) < gmax + 1 + surplus:
        raise PrecisionError(
            f"need at least {gmax + 1 + surplus} raw coefficients, have {len(rs)}"
        )
    yprec = max(rs) + 1
    cols = [ybasis_element(g, yprec) for g in range(gmax + 1)]
    rows, rhs, labels = [], [], []
    for r in rs:
        rows.append([col.terms.get((r,), Fraction(0)) for col in cols])
        rhs.append(raw_coeffs[r])
        labels.append(r)
    sol = solve_overdetermined(rows, rhs, labels=labels)
    return SymYLaurent({g: c for g, c in enumerate(sol)})


def y_basis_convert(data, direction, gmax=None, uprec=None):
    """Spec-level front end for the basis conversions.

    direction "raw_to_basis": ``data`` is a dict {y-exponent: coefficient},
    ``gmax`` required.  direction "basis_to_u": ``data`` is a SymYLaurent,
    ``uprec`` required.
    """
    if direction == "raw_to_basis":
        return y_basis_fit(data, gmax)
    if direction == "basis_to_u":
        return data.to_u_series(uprec)
    raise SeriesError(f"unknown direction {direction!r}")
