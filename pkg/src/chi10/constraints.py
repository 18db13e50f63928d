"""The constraint system satisfied by the partition function, and its
finite-dimensional uniqueness shadow.

A candidate three-variable series F(u, q, qt) is tested against:

Property 1: F = sum a_{g,h,d} u^(2g-2) q^(h-1) qt^(d-1) with rational
    coefficients (poles bounded by u^-2, q^-1, qt^-1; only even u-powers).

Property 2: for every h, the q^(h-1) slice times phi_{-2,1}(u, qt) Delta(qt)
    is a weak Jacobi form of weight 0 and index h in (u, qt).

Property 3: F_{g,d}(q) = [F]_{u^(2g-2) qt^(d-1)} satisfies
    (a) Delta(q) F_{g,d} in QMod_{2g} and (b) d/dC2 F_{g,d} = (2d-2) F_{g-1,d}.

The uniqueness kernel realizes these constraints, restricted to a finite
window, as one exact linear system.  Slices are parameterized through the
symmetric basis (y^(1/2)+y^(-1/2))^(2g-2) (an upper-triangular change of
variables from the u-coefficients a_{g,h,d}), which is what makes the
truncation by a genus bound exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Chi10Error, PrecisionError, RecognitionError, SeriesError
from .jacobi import (
    JacobiPolynomial,
    jacobi_basis,
    jacobi_recognize,
    phi_m2_1_fourier,
    phi_m2_1_utaylor,
    phi_0_1_utaylor,
    sin_half_squared_times4,
    wp_fourier_y,
)
from .linalg import kernel_basis, solve_overdetermined
from .qmod import (
    QModPolynomial,
    delta_series,
    qmod_basis,
    qmod_recognize,
)
from .series import INF_PREC, TruncatedSeries


@dataclass
class ConstraintReport:
    """Outcome of one property check over an explicit window."""

    prop: str
    window: dict
    status: str  # "pass" | "fail" | "insufficient-precision"
    checked: int = 0
    witness: object = None
    data: dict = field(default_factory=dict)

    def ok(self):
        return self.status == "pass"


# ----------------------------------------------------------------------
# property checks on a computed series
# ----------------------------------------------------------------------


def check_property1(F: TruncatedSeries) -> ConstraintReport:
    """Laurent shape: u-exponents even and >= -2, q/qt exponents >= -1.

    Accepts the w-form of the series (variable w or u first); rationality is
    structural, every stored coefficient is an exact rational.
    """
    xvar = F.vars[0]
    if set(F.vars) - {"u", "w", "y"} != {"q", "qt"}:
        return ConstraintReport("1", {}, "fail", witness="wrong variable set")
    window = {"vars": F.vars, "prec": F.prec, "floor": F.floor}
    checked = 0
    for e in sorted(F.terms):
        if xvar in ("u", "w"):
            if e[0] % 2 or e[0] < -2:
                return ConstraintReport("1", window, "fail", checked, witness=e)
        if e[1] < -1 or e[2] < -1:
            return ConstraintReport("1", window, "fail", checked, witness=e)
        checked += 1
    return ConstraintReport("1", window, "pass", checked)


def check_property2(F: TruncatedSeries, h) -> ConstraintReport:
    """Multiply the q^(h-1) slice by phi_{-2,1}(u, qt) Delta(qt) and
    recognize the product in J_{0,h}; the recognized polynomial is reported.
    """
    iq = F.vars.index("q")
    if h - 1 >= F.prec[iq]:
        return ConstraintReport("2", {"h": h}, "insufficient-precision")
    sl = F.extract("q", h - 1).rename_var("qt", "q").tighten_floor("y")
    qtprec = sl.prec[sl.vars.index("q")]
    phim2 = phi_m2_1_fourier(qtprec).tighten_floor("y")
    delta = delta_series(qtprec).truncate("q", qtprec).promote(("y", "q"), {"y": INF_PREC})
    prod = sl * phim2 * delta
    window = {"h": h, "qt_orders": prod.prec[1], "y_window": (prod.floor[0], prod.prec[0])}
    try:
        poly = jacobi_recognize(prod, 0, h)
    except (RecognitionError, PrecisionError) as exc:
        status = "insufficient-precision" if isinstance(exc, PrecisionError) else "fail"
        return ConstraintReport("2", window, status, witness=getattr(exc, "witness", str(exc)))
    return ConstraintReport("2", window, "pass", checked=len(prod.terms), data={"poly": poly})


def property3_slices(Fw: TruncatedSeries, gmax, dmax):
    """Recognized polynomials P_{g,d} with Delta * F_{g,d} = P_{g,d} in QMod_{2g}.

    ``Fw`` is the w-form; the u-normalized slice picks up the sign
    (-1)^(g-1) from w = i u.
    """
    qprec = Fw.prec[1]
    delta = delta_series(qprec).truncate("q", qprec)
    out = {}
    for g in range(gmax + 1):
        for d in range(dmax + 1):
            sl = Fw.extract("w", 2 * g - 2).extract("qt", d - 1)
            if (g - 1) % 2:
                sl = -sl
            prod = delta * sl
            out[(g, d)] = qmod_recognize(prod, 2 * g)
    return out


def check_property3(Fw: TruncatedSeries, gmax, dmax) -> ConstraintReport:
    """Membership Delta F_{g,d} in QMod_{2g} plus the derivative relation
    d/dC2 F_{g,d} = (2d-2) F_{g-1,d}, both at recognized-polynomial level.
    """
    window = {"gmax": gmax, "dmax": dmax, "qprec": Fw.prec[1]}
    try:
        polys = property3_slices(Fw, gmax, dmax)
    except (RecognitionError, PrecisionError) as exc:
        status = "insufficient-precision" if isinstance(exc, PrecisionError) else "fail"
        return ConstraintReport("3a", window, status, witness=getattr(exc, "witness", str(exc)))
    checked = len(polys)
    for g in range(1, gmax + 1):
        for d in range(dmax + 1):
            lhs = polys[(g, d)].ddc2()
            rhs = polys[(g - 1, d)] * Fraction(2 * d - 2)
            if not (lhs - rhs).is_zero():
                return ConstraintReport(
                    "3b", window, "fail", checked, witness=(g, d),
                    data={"lhs": lhs, "rhs": rhs},
                )
            checked += 1
    return ConstraintReport("3", window, "pass", checked, data={"polys": polys})


# ----------------------------------------------------------------------
# the ansatz for low q-slices: Delta * slice / Theta^(2h-2) in the
# (wp, C4, C6) presentation with purely modular coefficients
# ----------------------------------------------------------------------


def ansatz_recognize(F: TruncatedSeries, h) -> dict:
    """Write Delta(qt) [F]_{q^(h-1)} as Theta(u, qt)^(2h-2) *
    sum_{i=0..h} f_i wp^(h-i) with f_i in Mod_{2i} (f_i = 0 when dim
    Mod_{2i} = 0); returns {i: f_i} with the weight-2i modular polynomials.

    Theta^2 here is the u-Taylor square, i.e. -phi_{-2,1}.  The theta power
    is multiplied onto the basis columns, so no series division occurs.
    """
    sl = F.extract("q", h - 1).rename_var("qt", "q").tighten_floor("y")
    qtprec = sl.prec[sl.vars.index("q")]
    delta = delta_series(qtprec).truncate("q", qtprec).promote(("y", "q"), {"y": INF_PREC})
    lhs = sl * delta
    theta_sq = -(phi_m2_1_fourier(qtprec).tighten_floor("y"))
    power = h - 1
    if power < 0:
        for _ in range(-power):
            lhs = lhs * theta_sq
        power = 0
    # columns: Theta^(2h-2) wp^(h-i) * (monomials of Mod_{2i}), i = 0..h
    wp = wp_fourier_y(qtprec, pmax=2 * qtprec + 4)
    columns = []
    names = []
    for i in range(h + 1):
        for mono in qmod_basis(2 * i, modular_only=True):
            col = QModPolynomial({mono: 1}).evaluate(qtprec).promote(("y", "q"), {"y": INF_PREC})
            for _ in range(h - i):
                col = (col * wp).tighten_floor("y")
            for _ in range(power):
                col = (col * theta_sq).tighten_floor("y")
            columns.append(col)
            names.append((i, mono))
    ylo = max([lhs.floor[0]] + [c.floor[0] for c in columns])
    yhi = min([lhs.prec[0]] + [c.prec[0] for c in columns]) - 1
    rows, rhs, labels = [], [], []
    for n in range(min(lhs.prec[1], qtprec)):
        for r in range(ylo, yhi + 1):
            rows.append([c.coeff((r, n)) for c in columns])
            rhs.append(lhs.coeff((r, n)))
            labels.append((n, r))
    if len(rows) < len(columns) + 4:
        raise PrecisionError("ansatz window too small")
    sol = solve_overdetermined(rows, rhs, labels=labels)
    out = {}
    for (i, mono), c in zip(names, sol):
        if c:
            out.setdefault(i, QModPolynomial.zero(2 * i))
            out[i] = out[i] + QModPolynomial({mono: c}, 2 * i)
    return out


# ----------------------------------------------------------------------
# the uniqueness kernel
# ----------------------------------------------------------------------


def _ybasis_u_series(g, uprec) -> TruncatedSeries:
    """(y^(1/2)+y^(-1/2))^(2g-2) as the even u-series ((-2 sin(u/2))^2)^(g-1)."""
    s2 = sin_half_squared_times4(uprec + 4)
    if g == 0:
        return s2.invert().truncate("u", uprec)
    return (s2 ** (g - 1)).truncate("u", uprec)


def _phi_delta_utable(umax, qtprec) -> TruncatedSeries:
    """phi_{-2,1}(u, qt) Delta(qt) as a series in (u, q)."""
    phi = phi_m2_1_utaylor(umax + 1).evaluate_q(qtprec)
    delta = delta_series(qtprec).truncate("q", qtprec).promote(("u", "q"), {"u": umax + 1})
    return phi * delta


def _jacobi_mono_utable(mono, umax, qtprec) -> TruncatedSeries:
    """u-Taylor expansion of a Jacobi monomial as a series in (u, q)."""
    a, b, c, d = mono
    from .elliptic import LaurentQMod

    poly = QModPolynomial({(0, a, b): 1})
    lq = LaurentQMod("u", {0: poly}, umax + 1)
    for _ in range(c):
        lq = lq * phi_m2_1_utaylor(umax + 1)
    for _ in range(d):
        lq = lq * phi_0_1_utaylor(umax + 1)
    return lq.evaluate_q(qtprec)


@dataclass
class KernelResult:
    dimension: int
    basis: list
    unknowns: list
    window: dict


def uniqueness_kernel(gbound, hbound, dbound, qprec=None, fix_a000=True) -> KernelResult:
    """Kernel of the windowed constraint system (the uniqueness shadow).

    Unknowns: basis coefficients c_{g,h,d} (g <= min(h+d, gbound)) of every
    (q^(h-1), qt^(d-1)) slice, plus auxiliary Jacobi-form coefficients for
    Property 2 and QMod coefficients for Property 3.  Equations: the
    membership windows u^(2j) (j <= gbound), qt^e (e <= dbound) and
    q^e (e <= hbound), the derivative relations, and optionally
    a_{0,0,0} = 0 (which in basis coordinates is c_{0,0,0} = 0).
    """
    if qprec is None:
        qprec = max(hbound, dbound) + 3
    qprec = max(qprec, hbound + 2, dbound + 2)
    umax = 2 * gbound
    unknowns = []
    for h in range(hbound + 1):
        for d in range(dbound + 1):
            for g in range(min(h + d, gbound) + 1):
                unknowns.append(("c", g, h, d))
    for h in range(hbound + 1):
        for mono in jacobi_basis(0, h):
            unknowns.append(("psi", h, mono))
    for g in range(gbound + 1):
        for d in range(dbound + 1):
            for mono in qmod_basis(2 * g):
                unknowns.append(("P", g, d, mono))
    index = {u: i for i, u in enumerate(unknowns)}
    ncols = len(unknowns)
    rows = []

    # tables
    phidelta = _phi_delta_utable(umax, qprec)
    gb_tables = {}
    for g in range(gbound + 1):
        gb_tables[g] = _ybasis_u_series(g, umax + 3) .promote(("u", "q"), {"q": qprec}) * phidelta
    mono_tables = {}
    for h in range(hbound + 1):
        for mono in jacobi_basis(0, h):
            if mono not in mono_tables:
                mono_tables[mono] = _jacobi_mono_utable(mono, umax, qprec)
    delta_q = delta_series(qprec).truncate("q", qprec)
    u_of_basis = {g: _ybasis_u_series(g, umax + 1) for g in range(gbound + 1)}
    cmono_series = {}
    for g in range(gbound + 1):
        for mono in qmod_basis(2 * g):
            if mono not in cmono_series:
                cmono_series[mono] = QModPolynomial({mono: 1}).evaluate(qprec)

    # Property 2 window equations
    for h in range(hbound + 1):
        for j in range(gbound + 1):
            for e in range(dbound + 1):
                row = [Fraction(0)] * ncols
                nonzero = False
                for d in range(dbound + 1):
                    for g in range(min(h + d, gbound) + 1):
                        val = gb_tables[g].coeff((2 * j, e - d + 1)) if 0 <= e - d + 1 < qprec else Fraction(0)
                        if val:
                            row[index[("c", g, h, d)]] = val
                            nonzero = True
                for mono in jacobi_basis(0, h):
                    val = mono_tables[mono].coeff((2 * j, e))
                    if val:
                        row[index[("psi", h, mono)]] = -val
                        nonzero = True
                if nonzero:
                    rows.append(row)

    # Property 3 membership and derivative relations
    for g in range(gbound + 1):
        for d in range(dbound + 1):
            for e in range(hbound + 1):
                row = [Fraction(0)] * ncols
                nonzero = False
                for h in range(hbound + 1):
                    if not (0 <= e - h + 1 < qprec):
                        continue
                    dd = delta_q.coeff((e - h + 1,))
                    if not dd:
                        continue
                    for gamma in range(min(h + d, gbound) + 1):
                        uval = u_of_basis[gamma].coeff((2 * g - 2,)) if 2 * g - 2 < umax + 1 else Fraction(0)
                        if uval:
                            row[index[("c", gamma, h, d)]] += dd * uval
                            nonzero = True
                for mono in qmod_basis(2 * g):
                    val = cmono_series[mono].coeff((e,))
                    if val:
                        row[index[("P", g, d, mono)]] = -val
                        nonzero = True
                if nonzero:
                    rows.append(row)
    for g in range(1, gbound + 1):
        for d in range(dbound + 1):
            for tgt in qmod_basis(2 * g - 2):
                row = [Fraction(0)] * ncols
                # d/dC2 of C2^a C4^b C6^c lands on (a-1, b, c) with factor a
                src = (tgt[0] + 1, tgt[1], tgt[2])
                if src in qmod_basis(2 * g):
                    row[index[("P", g, d, src)]] = Fraction(src[0])
                row[index[("P", g - 1, d, tgt)]] = Fraction(-(2 * d - 2))
                rows.append(row)

    if fix_a000:
        row = [Fraction(0)] * ncols
        row[index[("c", 0, 0, 0)]] = Fraction(1)
        rows.append(row)

    basis = kernel_basis(rows, ncols)
    window = {"gbound": gbound, "hbound": hbound, "dbound": dbound, "qprec": qprec}
    return KernelResult(len(basis), basis, unknowns, window)
