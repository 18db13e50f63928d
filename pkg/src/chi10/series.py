"""Exact truncated multivariate Laurent series.

A :class:`TruncatedSeries` stores finitely many terms of a Laurent series in
up to three named variables, together with a per-variable truncation order
(``prec``; exponents >= prec are unknown) and a per-variable lower bound on
occurring exponents (``floor``).  All coefficients are
:class:`fractions.Fraction`; floating point never enters.

Precision is tracked pessimistically: a product only reports coefficients
that are fully determined by the known coefficients of both factors,
``prec_result[v] = min(prec_a[v] + floor_b[v], prec_b[v] + floor_a[v])``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import PrecisionError, SeriesError

#: canonical variable order; every series keeps its variables in this order
VAR_ORDER = ("u", "y", "p", "w", "Q", "q", "qt")

#: sentinel precision for a direction in which a series is exact (finite,
#: fully known support); survives the pessimistic propagation rules
INF_PREC = 10 ** 9

_VAR_POS = {v: i for i, v in enumerate(VAR_ORDER)}


def fmt_fraction(x) -> str:
    """Render an exact rational as ``num/den`` with positive denominator."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise SeriesError(f"coefficients must be exact rationals, got {type(x)!r}")


class TruncatedSeries:
    """Sparse exact Laurent series with per-variable precision and floor."""

    __slots__ = ("vars", "terms", "prec", "floor")

    def __init__(self, vars, terms, prec, floor):
        vars = tuple(vars)
        if any(v not in _VAR_POS for v in vars):
            raise SeriesError(f"unknown variable in {vars}")
        if list(vars) != sorted(vars, key=_VAR_POS.__getitem__):
            raise SeriesError(f"variables must follow canonical order: {vars}")
        if len(set(vars)) != len(vars):
            raise SeriesError(f"repeated variable in {vars}")
        prec = tuple(int(p) for p in prec)
        floor = tuple(int(f) for f in floor)
        if not (len(prec) == len(floor) == len(vars)):
            raise SeriesError("prec/floor length must match variable count")
        clean = {}
        for e, c in terms.items():
            c = _as_fraction(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != len(vars):
                raise SeriesError("exponent tuple length mismatch")
            for x, p, f in zip(e, prec, floor):
                if x >= p:
                    raise SeriesError(f"stored exponent {e} at/above precision {prec}")
                if x < f:
                    raise SeriesError(f"stored exponent {e} below floor {floor}")
            clean[e] = c
        self.vars = vars
        self.terms = clean
        self.prec = prec
        self.floor = floor

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, vars, prec, floor=None):
        vars = tuple(vars)
        if floor is None:
            floor = (0,) * len(vars)
        return cls(vars, {}, prec, floor)

    @classmethod
    def constant(cls, vars, value, prec, floor=None):
        vars = tuple(vars)
        if floor is None:
            floor = (0,) * len(vars)
        return cls(vars, {(0,) * len(vars): _as_fraction(value)}, prec, floor)

    @classmethod
    def monomial(cls, vars, exps, coeff, prec, floor=None):
        vars = tuple(vars)
        exps = tuple(exps)
        if floor is None:
            floor = tuple(min(e, 0) for e in exps)
        return cls(vars, {exps: _as_fraction(coeff)}, prec, floor)

    # ------------------------------------------------------------------
    # simple accessors
    # ------------------------------------------------------------------

    def _axis(self, var) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise SeriesError(f"series in {self.vars} has no variable {var!r}") from None

    def coeff(self, exps) -> Fraction:
        """Coefficient of the given exponent tuple; errors if unknown."""
        exps = tuple(int(x) for x in exps)
        for x, p in zip(exps, self.prec):
            if x >= p:
                raise PrecisionError(f"coefficient {exps} is beyond precision {self.prec}")
        return self.terms.get(exps, Fraction(0))

    def coeff1(self, var, e) -> Fraction:
        """Coefficient of ``var**e`` for a univariate series."""
        if len(self.vars) != 1 or self.vars[0] != var:
            raise SeriesError(f"coeff1 expects a series in ({var},)")
        return self.coeff((e,))

    def items_sorted(self):
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def support_min(self, var) -> int:
        """Smallest occurring exponent of ``var`` (floor if no terms)."""
        i = self._axis(var)
        if not self.terms:
            return self.floor[i]
        return min(e[i] for e in self.terms)

    def support_max(self, var) -> int:
        i = self._axis(var)
        if not self.terms:
            return self.floor[i]
        return max(e[i] for e in self.terms)

    def __repr__(self):
        n = len(self.terms)
        return f"TruncatedSeries(vars={self.vars}, {n} terms, prec={self.prec}, floor={self.floor})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.terms == other.terms
            and self.prec == other.prec
            and self.floor == other.floor
        )

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items())), self.prec, self.floor))

    def same_terms(self, other) -> bool:
        """Mathematical equality of the stored coefficients (ignores prec)."""
        return self.vars == other.vars and self.terms == other.terms

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def _check_vars(self, other):
        if self.vars != other.vars:
            raise SeriesError(f"variable-set mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.vars, other, self.prec, self.floor)
        self._check_vars(other)
        prec = tuple(min(a, b) for a, b in zip(self.prec, other.prec))
        floor = tuple(min(a, b) for a, b in zip(self.floor, other.floor))
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        terms = {e: c for e, c in terms.items() if all(x < p for x, p in zip(e, prec))}
        return TruncatedSeries(self.vars, terms, prec, floor)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.vars, {e: -c for e, c in self.terms.items()}, self.prec, self.floor)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.vars, other, self.prec, self.floor)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _as_fraction(c)
        if c == 0:
            return TruncatedSeries.zero(self.vars, self.prec, self.floor)
        return TruncatedSeries(self.vars, {e: c * v for e, v in self.terms.items()}, self.prec, self.floor)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_vars(other)
        prec = tuple(
            min(pa + fb, pb + fa)
            for pa, fa, pb, fb in zip(self.prec, self.floor, other.prec, other.floor)
        )
        floor = tuple(fa + fb for fa, fb in zip(self.floor, other.floor))
        terms = {}
        get = terms.get
        bitems = list(other.terms.items())
        for ea, ca in self.terms.items():
            for eb, cb in bitems:
                e = tuple(x + y for x, y in zip(ea, eb))
                if any(x >= p for x, p in zip(e, prec)):
                    continue
                s = get(e)
                if s is None:
                    terms[e] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        terms[e] = s
                    else:
                        del terms[e]
        return TruncatedSeries(self.vars, terms, prec, floor)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            raise SeriesError("powers must be integers")
        if n < 0:
            return self.invert() ** (-n)
        result = TruncatedSeries.constant(self.vars, 1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ------------------------------------------------------------------
    # inversion, exp, log
    # ------------------------------------------------------------------

    def invert(self):
        """Multiplicative inverse, assuming a leading-unit monomial.

        The recursion peels off the last variable: the lowest slice in that
        variable must itself be invertible.  For a univariate series this is
        the usual condition that the lowest-order term is a single monomial.
        """
        if not self.vars:
            c = self.terms.get((), Fraction(0))
            if c == 0:
                raise SeriesError("no invertible leading monomial (zero series)")
            return TruncatedSeries((), {(): 1 / c}, (), ())
        v = self.vars[-1]
        slices = self.slice_var(v)
        if not slices:
            raise SeriesError("no invertible leading monomial (zero series)")
        e0 = min(slices)
        n_v = self.prec[-1]
        if n_v >= INF_PREC // 2 and len(slices) > 1:
            raise PrecisionError(
                f"inverse has an infinite tail in exact variable {v}; truncate first"
            )
        if len(slices) == 1:
            # monomial in v: invert the slice and flip the exponent
            inv = slices[e0].invert()
            terms = {e + (-e0,): c for e, c in inv.terms.items()}
            prec = inv.prec + (n_v if n_v >= INF_PREC // 2 else n_v - 2 * e0,)
            return TruncatedSeries(self.vars, terms, prec, inv.floor + (-e0,))
        inv0 = slices[e0].invert()
        # write a = v^e0 (a_0 + a_1 v + ...); solve b = v^-e0 (b_0 + b_1 v + ...)
        # from a_0 b_0 = 1 and sum_{s<=f} a_s b_{f-s} = 0 for f >= 1
        bs = {0: inv0}
        # result exponents f - e0 run up to the output precision n_v - 2*e0
        for f in range(1, n_v - e0):
            acc = None
            for s in range(1, f + 1):
                a_s = slices.get(e0 + s)
                if a_s is None:
                    continue
                term = a_s * bs[f - s]
                acc = term if acc is None else acc + term
            bs[f] = -(inv0 * acc) if acc is not None else inv0.scale(0)
        inner_prec = None
        for b in bs.values():
            inner_prec = b.prec if inner_prec is None else tuple(min(x, y) for x, y in zip(inner_prec, b.prec))
        inner_floor = tuple(min(b.floor[i] for b in bs.values()) for i in range(len(self.vars) - 1))
        terms = {}
        for f, b in bs.items():
            for e, c in b.terms.items():
                if any(x >= p for x, p in zip(e, inner_prec)):
                    continue
                terms[e + (f - e0,)] = c
        prec = inner_prec + (n_v - 2 * e0,)
        floor = inner_floor + (-e0,)
        return TruncatedSeries(self.vars, terms, prec, floor)

    def exp(self, grading_vars=None):
        """Formal exponential.

        Every term must have positive total degree in ``grading_vars`` and
        nonnegative exponents there (default: all variables, matching the
        textbook precondition of no constant and no negative exponents).
        Exponents of non-grading variables may be negative; the terms still
        die under truncation because their grading degree grows.
        """
        if grading_vars is None:
            grading_vars = self.vars
        idx = [self.vars.index(v) for v in grading_vars]
        if not idx:
            raise SeriesError("exp needs at least one grading variable")
        by_deg = {}
        for e, c in self.terms.items():
            if any(e[i] < 0 for i in idx):
                raise SeriesError("exp requires nonnegative exponents in grading variables")
            d = sum(e[i] for i in idx)
            if d <= 0:
                raise SeriesError("exp requires positive grading degree in every term")
            by_deg.setdefault(d, {})[e] = c
        max_deg = sum(max(self.prec[i] - 1, 0) for i in idx)
        # comp[t] = degree-t part of exp(a): t*comp[t] = sum_s s*a_s*comp[t-s]
        out = {(0,) * len(self.vars): Fraction(1)}
        comp = {0: dict(out)}
        prec = self.prec
        for t in range(1, max_deg + 1):
            new = {}
            for s, a_s in by_deg.items():
                if s > t:
                    continue
                prev = comp.get(t - s)
                if not prev:
                    continue
                for ea, ca in a_s.items():
                    ca_s = ca * s
                    for eb, cb in prev.items():
                        e = tuple(x + y for x, y in zip(ea, eb))
                        if any(x >= p for x, p in zip(e, prec)):
                            continue
                        val = new.get(e, Fraction(0)) + ca_s * cb
                        if val:
                            new[e] = val
                        else:
                            new.pop(e, None)
            inv_t = Fraction(1, t)
            comp[t] = {e: c * inv_t for e, c in new.items()}
            out.update(comp[t])
        out = {e: c for e, c in out.items() if c}
        # each contributing product has at most max_deg factors
        floor = tuple(0 if f >= 0 else f * max(max_deg, 1) for f in self.floor)
        return TruncatedSeries(self.vars, out, self.prec, floor)

    def log(self):
        """Formal logarithm of a series with constant term 1."""
        one = (0,) * len(self.vars)
        if self.terms.get(one) != 1:
            raise SeriesError("log requires constant term 1")
        for e in self.terms:
            if any(x < 0 for x in e):
                raise SeriesError("log requires no negative exponents")
        by_deg = {}
        for e, c in self.terms.items():
            d = sum(e)
            if d > 0:
                by_deg.setdefault(d, {})[e] = c
        max_deg = sum(p - 1 for p in self.prec)
        lcomp = {}
        prec = self.prec
        for t in range(1, max_deg + 1):
            acc = dict(by_deg.get(t, {}))
            acc = {e: c * t for e, c in acc.items()}
            for s in range(1, t):
                l_s = lcomp.get(s)
                a_ts = by_deg.get(t - s)
                if not l_s or not a_ts:
                    continue
                for ea, ca in l_s.items():
                    ca_s = ca * s
                    for eb, cb in a_ts.items():
                        e = tuple(x + y for x, y in zip(ea, eb))
                        if any(x >= p for x, p in zip(e, prec)):
                            continue
                        acc[e] = acc.get(e, Fraction(0)) - ca_s * cb
            inv_t = Fraction(1, t)
            lcomp[t] = {e: c * inv_t for e, c in acc.items() if c}
        out = {}
        for comp in lcomp.values():
            for e, c in comp.items():
                s = out.get(e, Fraction(0)) + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return TruncatedSeries(self.vars, out, self.prec, (0,) * len(self.vars))

    # ------------------------------------------------------------------
    # derivations and substitutions
    # ------------------------------------------------------------------

    def derive(self, var):
        """Apply the Euler operator ``var * d/d var``."""
        i = self._axis(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                terms[e] = c * e[i]
        return TruncatedSeries(self.vars, terms, self.prec, self.floor)

    def substitute_power(self, var, n):
        """Replace ``var`` by ``var**n`` (n >= 1)."""
        if n < 1:
            raise SeriesError("substitute_power requires n >= 1")
        i = self._axis(var)
        terms = {e[:i] + (e[i] * n,) + e[i + 1:]: c for e, c in self.terms.items()}
        prec = list(self.prec)
        floor = list(self.floor)
        # exponents >= n*prec are unknown; non-multiples of n in between are
        # known to vanish, so the scaled precision is exactly n*prec
        prec[i] = n * prec[i]
        floor[i] = n * floor[i]
        return TruncatedSeries(self.vars, terms, tuple(prec), tuple(floor))

    def collapse_power(self, var, n):
        """Inverse of :meth:`substitute_power`: divide all exponents by n.

        Errors if any occurring exponent of ``var`` is not a multiple of n.
        """
        if n < 1:
            raise SeriesError("collapse_power requires n >= 1")
        i = self._axis(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] % n:
                raise SeriesError(f"exponent {e[i]} of {var} not divisible by {n}")
            terms[e[:i] + (e[i] // n,) + e[i + 1:]] = c
        prec = list(self.prec)
        floor = list(self.floor)
        prec[i] = -((-prec[i]) // n)  # ceil: target e is known iff n*e < prec
        floor[i] = -((-floor[i]) // n)  # occurring e = source/n >= ceil(floor/n)
        return TruncatedSeries(self.vars, terms, tuple(prec), tuple(floor))

    def negate_var(self, var):
        """Substitute ``var -> -var`` (flip sign of odd-exponent terms)."""
        i = self._axis(var)
        terms = {e: (-c if e[i] % 2 else c) for e, c in self.terms.items()}
        return TruncatedSeries(self.vars, terms, self.prec, self.floor)

    def shift(self, var, k):
        """Multiply by ``var**k`` (shifts exponents, precision and floor)."""
        i = self._axis(var)
        terms = {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in self.terms.items()}
        prec = list(self.prec)
        floor = list(self.floor)
        prec[i] += k
        floor[i] += k
        return TruncatedSeries(self.vars, terms, tuple(prec), tuple(floor))

    def tighten_floor(self, *vars):
        """Raise the declared floor of the given variables to the stored
        support minimum.

        Sound for a variable transverse to the series' grading directions
        (whose floors must stay globally honest); trusted coefficients are
        those with every exponent inside the box, so any unknown-tail
        contamination is excluded through the grading variables' rule.
        """
        floor = list(self.floor)
        for v in vars:
            i = self._axis(v)
            if self.terms:
                floor[i] = max(floor[i], min(e[i] for e in self.terms))
        return TruncatedSeries(self.vars, self.terms, self.prec, tuple(floor))

    def declare_exact(self, var):
        """Assert that the series is exact in ``var`` (no unknown tail).

        The caller takes responsibility for the mathematical justification,
        e.g. a finite-support theorem verified on the computed window.
        """
        i = self._axis(var)
        prec = list(self.prec)
        prec[i] = INF_PREC
        floor = list(self.floor)
        if self.terms:
            floor[i] = max(floor[i], min(e[i] for e in self.terms))
        return TruncatedSeries(self.vars, self.terms, tuple(prec), tuple(floor))

    def truncate(self, var, new_prec):
        i = self._axis(var)
        if new_prec > self.prec[i]:
            raise PrecisionError(f"cannot raise precision of {var} from {self.prec[i]} to {new_prec}")
        prec = list(self.prec)
        prec[i] = new_prec
        terms = {e: c for e, c in self.terms.items() if e[i] < new_prec}
        return TruncatedSeries(self.vars, terms, tuple(prec), self.floor)

    def extract(self, var, e) -> "TruncatedSeries":
        """Coefficient of ``var**e`` as a series in the remaining variables."""
        i = self._axis(var)
        if e >= self.prec[i]:
            raise PrecisionError(f"slice {var}^{e} is beyond precision {self.prec[i]}")
        vars = self.vars[:i] + self.vars[i + 1:]
        prec = self.prec[:i] + self.prec[i + 1:]
        floor = self.floor[:i] + self.floor[i + 1:]
        terms = {}
        for exps, c in self.terms.items():
            if exps[i] == e:
                terms[exps[:i] + exps[i + 1:]] = c
        return TruncatedSeries(vars, terms, prec, floor)

    def slice_var(self, var) -> dict:
        """All slices along ``var`` as ``{exponent: series in other vars}``.

        Each slice's floors are tightened to its own stored support, which
        keeps precision sharp in the slice recurrences (notably inversion).
        """
        i = self._axis(var)
        out = {}
        for exps, c in self.terms.items():
            out.setdefault(exps[i], {})[exps[:i] + exps[i + 1:]] = c
        vars = self.vars[:i] + self.vars[i + 1:]
        prec = self.prec[:i] + self.prec[i + 1:]
        floor = self.floor[:i] + self.floor[i + 1:]
        result = {}
        for e, t in sorted(out.items()):
            tf = tuple(
                max(f, min(k[j] for k in t)) for j, f in enumerate(floor)
            ) if t else floor
            result[e] = TruncatedSeries(vars, t, prec, tf)
        return result

    def promote(self, new_vars, prec_for_new, floor_for_new=None):
        """Embed into a larger variable set (new variables enter exactly).

        ``prec_for_new``/``floor_for_new`` map each added variable to its
        declared precision/floor.  Promotion is truth-preserving: the series
        does not involve the new variables, so any claimed precision is valid.
        """
        new_vars = tuple(sorted(set(new_vars) | set(self.vars), key=_VAR_POS.__getitem__))
        if floor_for_new is None:
            floor_for_new = {}
        pos = {v: i for i, v in enumerate(self.vars)}
        prec, floor = [], []
        for v in new_vars:
            if v in pos:
                prec.append(self.prec[pos[v]])
                floor.append(self.floor[pos[v]])
            else:
                prec.append(prec_for_new[v])
                floor.append(floor_for_new.get(v, 0))
        terms = {}
        for e, c in self.terms.items():
            ne = tuple(e[pos[v]] if v in pos else 0 for v in new_vars)
            terms[ne] = c
        return TruncatedSeries(new_vars, terms, tuple(prec), tuple(floor))

    def rename_var(self, old, new):
        i = self._axis(old)
        vars = list(self.vars)
        vars[i] = new
        order = sorted(range(len(vars)), key=lambda j: _VAR_POS[vars[j]])
        nv = tuple(vars[j] for j in order)
        terms = {tuple(e[j] for j in order): c for e, c in self.terms.items()}
        prec = tuple(self.prec[j] for j in order)
        floor = tuple(self.floor[j] for j in order)
        return TruncatedSeries(nv, terms, prec, floor)

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json(self) -> str:
        obj = {
            "vars": list(self.vars),
            "prec": {v: p for v, p in zip(self.vars, self.prec)},
            "floor": {v: f for v, f in zip(self.vars, self.floor)},
            "terms": [
                {"e": list(e), "c": fmt_fraction(c)} for e, c in self.items_sorted()
            ],
        }
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text) -> "TruncatedSeries":
        obj = json.loads(text) if isinstance(text, str) else text
        vars = tuple(obj["vars"])
        prec = tuple(obj["prec"][v] for v in vars)
        floor = tuple(obj["floor"][v] for v in vars)
        terms = {tuple(t["e"]): parse_fraction(t["c"]) for t in obj["terms"]}
        return cls(vars, terms, prec, floor)


# ----------------------------------------------------------------------
# module-level operation aliases (the functional surface)
# ----------------------------------------------------------------------


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    return a.invert()


def series_exp(a: TruncatedSeries, grading_vars=None) -> TruncatedSeries:
    return a.exp(grading_vars)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    return a.log()


def series_q_derive(a: TruncatedSeries, var) -> TruncatedSeries:
    return a.derive(var)


def series_substitute_power(a: TruncatedSeries, var, n) -> TruncatedSeries:
    return a.substitute_power(var, n)


def w_to_u(a: TruncatedSeries) -> TruncatedSeries:
    """Convert an even series in ``w`` to the variable ``u`` via ``w = i*u``.

    Only even powers of ``w`` may occur; the coefficient of ``u**(2j)`` picks
    up the sign ``(-1)**j``.  This is the one place where the imaginary unit
    is bookkept, so that every stored coefficient stays rational.
    """
    i = a._axis("w")
    terms = {}
    for e, c in a.terms.items():
        if e[i] % 2:
            raise SeriesError("w_to_u requires an even series in w")
        sign = -1 if (e[i] // 2) % 2 else 1
        terms[e] = c * sign
    out = TruncatedSeries(a.vars, terms, a.prec, a.floor)
    return out.rename_var("w", "u")


def u_to_w(a: TruncatedSeries) -> TruncatedSeries:
    """Inverse of :func:`w_to_u`."""
    i = a._axis("u")
    terms = {}
    for e, c in a.terms.items():
        if e[i] % 2:
            raise SeriesError("u_to_w requires an even series in u")
        sign = -1 if (e[i] // 2) % 2 else 1
        terms[e] = c * sign
    out = TruncatedSeries(a.vars, terms, a.prec, a.floor)
    return out.rename_var("u", "w")
