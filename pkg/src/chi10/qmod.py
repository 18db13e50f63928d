"""The graded ring QMod = Q[C2, C4, C6] of quasimodular forms.

C_k denotes the weight-k Eisenstein series normalized as

    C_k(q) = -B_k/(k * k!) + (2/k!) * sum_{n>=1} sum_{d|n} d^{k-1} q^n,

so C_2 = -1/24 + q + 3q^2 + ..., C_4 = 1/2880 + q/12 + ...  The ring is free
on C_2, C_4, C_6; weight grading assigns C_k weight k.  The derivation
d/dC_2 is defined on the polynomial presentation only.  Recognition of a
q-expansion as a polynomial in the generators is exact linear algebra with a
surplus-coefficient certificate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import PrecisionError, RecognitionError, SeriesError
from .linalg import solve_overdetermined
from .series import TruncatedSeries, fmt_fraction


# ----------------------------------------------------------------------
# Bernoulli numbers and Eisenstein series
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_upto(n):
    """B_0..B_n with the B_1 = -1/2 convention, by the defining recurrence."""
    from math import comb

    vals = [Fraction(1)]
    for k in range(1, n + 1):
        s = sum(Fraction(comb(k + 1, j)) * vals[j] for j in range(k))
        vals.append(-s / (k + 1))
    return tuple(vals)


def bernoulli(k) -> Fraction:
    if k < 0:
        raise ValueError("Bernoulli numbers need k >= 0")
    return _bernoulli_upto(k)[k]


def _divisor_power_sum(n, e) -> int:
    return sum(d ** e for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def eisenstein_series(k, n_prec) -> TruncatedSeries:
    """q-expansion of C_k through order ``n_prec`` (exclusive)."""
    if k < 2 or k % 2:
        raise SeriesError("Eisenstein series C_k needs even k >= 2")
    from math import factorial

    terms = {(0,): -bernoulli(k) / (k * factorial(k))}
    pref = Fraction(2, factorial(k))
    for n in range(1, n_prec):
        terms[(n,)] = pref * _divisor_power_sum(n, k - 1)
    return TruncatedSeries(("q",), terms, (n_prec,), (0,))


@lru_cache(maxsize=None)
def delta_series(n_prec) -> TruncatedSeries:
    """The discriminant Delta = q * prod_{m>=1} (1 - q^m)^24."""
    out = TruncatedSeries.constant(("q",), 1, (n_prec,))
    for m in range(1, n_prec):
        f = TruncatedSeries(("q",), {(0,): 1, (m,): -1}, (n_prec,), (0,))
        out = out * (f ** 24)
    return out.shift("q", 1)


# ----------------------------------------------------------------------
# polynomials in the generators
# ----------------------------------------------------------------------


def _monomial_weight(exps) -> int:
    a, b, c = exps
    return 2 * a + 4 * b + 6 * c


class QModPolynomial:
    """Polynomial in C2, C4, C6 with exact rational coefficients.

    Keys are exponent triples (a, b, c) for C2^a C4^b C6^c.  ``weight`` is
    the declared weight; when set, homogeneity is enforced.
    """

    __slots__ = ("terms", "weight")

    def __init__(self, terms, weight=None):
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != 3 or any(x < 0 for x in e):
                raise SeriesError(f"bad generator exponents {e}")
            if weight is not None and _monomial_weight(e) != weight:
                raise SeriesError(f"monomial {e} violates declared weight {weight}")
            clean[e] = c
        self.terms = clean
        self.weight = weight

    @classmethod
    def zero(cls, weight=None):
        return cls({}, weight)

    @classmethod
    def generator(cls, k):
        e = {2: (1, 0, 0), 4: (0, 1, 0), 6: (0, 0, 1)}[k]
        return cls({e: Fraction(1)}, weight=k)

    @classmethod
    def const(cls, value):
        return cls({(0, 0, 0): Fraction(value)}, weight=0 if value else None)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, QModPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QModPolynomial.const(other)
        w = self.weight if self.weight == other.weight else None
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return QModPolynomial(terms, w)

    __radd__ = __add__

    def __neg__(self):
        return QModPolynomial({e: -c for e, c in self.terms.items()}, self.weight)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QModPolynomial.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QModPolynomial.zero(self.weight)
            return QModPolynomial({e: c * other for e, c in self.terms.items()}, self.weight)
        w = None
        if self.weight is not None and other.weight is not None:
            w = self.weight + other.weight
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                s = terms.get(e, Fraction(0)) + ca * cb
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return QModPolynomial(terms, w)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = QModPolynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def ddc2(self) -> "QModPolynomial":
        """Formal partial derivative with respect to C2 (weight drops by 2)."""
        terms = {}
        for (a, b, c), v in self.terms.items():
            if a:
                terms[(a - 1, b, c)] = v * a
        w = self.weight - 2 if self.weight is not None else None
        return QModPolynomial(terms, w)

    def project_modular(self) -> "QModPolynomial":
        """Drop every monomial containing C2 (the modular projection)."""
        return QModPolynomial(
            {e: c for e, c in self.terms.items() if e[0] == 0}, self.weight
        )

    def is_modular(self) -> bool:
        return all(e[0] == 0 for e in self.terms)

    def max_weight(self) -> int:
        return max((_monomial_weight(e) for e in self.terms), default=0)

    def weight_part(self, k) -> "QModPolynomial":
        return QModPolynomial(
            {e: c for e, c in self.terms.items() if _monomial_weight(e) == k}, k
        )

    def evaluate(self, n_prec) -> TruncatedSeries:
        """Substitute the Eisenstein q-expansions, exact through q^n_prec."""
        out = TruncatedSeries.zero(("q",), (n_prec,))
        for (a, b, c), v in sorted(self.terms.items()):
            s = TruncatedSeries.constant(("q",), v, (n_prec,))
            if a:
                s = s * eisenstein_series(2, n_prec) ** a
            if b:
                s = s * eisenstein_series(4, n_prec) ** b
            if c:
                s = s * eisenstein_series(6, n_prec) ** c
            out = out + s
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            names = []
            for name, x in zip(("C2", "C4", "C6"), e):
                if x == 1:
                    names.append(name)
                elif x > 1:
                    names.append(f"{name}^{x}")
            mono = "*".join(names) if names else "1"
            parts.append(f"({fmt_fraction(c)})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json_obj(self):
        return {
            "weight": self.weight,
            "terms": [
                {"e": list(e), "c": fmt_fraction(c)} for e, c in sorted(self.terms.items())
            ],
        }


def qmod_evaluate(p: QModPolynomial, n_prec) -> TruncatedSeries:
    return p.evaluate(n_prec)


def qmod_ddc2(p: QModPolynomial) -> QModPolynomial:
    return p.ddc2()


def qmod_project_modular(p: QModPolynomial) -> QModPolynomial:
    return p.project_modular()


# ----------------------------------------------------------------------
# recognition
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def qmod_basis(weight, modular_only=False):
    """Monomial exponent triples of the given weight, in deterministic order."""
    out = []
    for a in range(0, weight // 2 + 1):
        if modular_only and a:
            continue
        for b in range(0, (weight - 2 * a) // 4 + 1):
            rest = weight - 2 * a - 4 * b
            if rest % 6 == 0:
                out.append((a, b, rest // 6))
    return tuple(sorted(out))


def qmod_dim(weight, modular_only=False) -> int:
    if weight < 0 or weight % 2:
        return 0
    return len(qmod_basis(weight, modular_only))


def qmod_recognize(s: TruncatedSeries, weight, modular_only=False, surplus=4) -> QModPolynomial:
    """Recognize a pure q-series as an element of QMod_weight.

    The series must carry at least ``dim + surplus`` known coefficients; the
    unique solution of the linear system is verified against every available
    coefficient.  Failure raises :class:`RecognitionError` with the first
    mismatching q-exponent as witness.
    """
    if s.vars != ("q",):
        raise SeriesError("recognition expects a series in the single variable q")
    if s.support_min("q") < 0:
        raise RecognitionError(
            "series has negative q-exponents, not a quasimodular form",
            witness=s.support_min("q"),
        )
    basis = qmod_basis(weight, modular_only)
    n_prec = s.prec[0]
    if s.is_zero() and not basis:
        return QModPolynomial.zero(weight)
    if not basis:
        raise RecognitionError(f"QMod has no elements of weight {weight}")
    dim = len(basis)
    if n_prec < dim + surplus:
        raise PrecisionError(
            f"need q-precision >= {dim + surplus} to recognize at weight {weight}, have {n_prec}"
        )
    cols = [QModPolynomial({e: 1}, weight).evaluate(n_prec) for e in basis]
    rows, rhs, labels = [], [], []
    for n in range(n_prec):
        rows.append([col.coeff((n,)) for col in cols])
        rhs.append(s.coeff((n,)))
        labels.append(n)
    sol = solve_overdetermined(rows, rhs, labels=labels)
    return QModPolynomial({e: c for e, c in zip(basis, sol)}, weight)


@lru_cache(maxsize=None)
def eisenstein_as_modular(k) -> QModPolynomial:
    """C_k (k >= 4 even) written as a polynomial in C4, C6.

    For k in {4, 6} this is the generator itself; higher weights are
    recognized once from the q-expansion and cached.
    """
    if k == 4 or k == 6:
        return QModPolynomial.generator(k)
    if k < 4 or k % 2:
        raise SeriesError("modular Eisenstein expression needs even k >= 4")
    n = qmod_dim(k) + 6
    return qmod_recognize(eisenstein_series(k, n), k, modular_only=True)


def valence_vanishing_order(weight) -> int:
    """Vanishing through q^floor(weight/12) forces a modular form to be 0."""
    return weight // 12
