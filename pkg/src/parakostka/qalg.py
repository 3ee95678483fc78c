"""Exact Laurent polynomials in q, q-binomial families, and series fitting.

QPoly stores (offset, coeffs) for sum coeffs[i] * q^(offset+i) with integer
coefficients; the stored ends are nonzero unless the polynomial is zero.
Printable form mirrors the shorthand q^a*(k0,...,km).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import shapes


class QPoly:
    __slots__ = ("offset", "coeffs")

    def __init__(self, offset: int = 0, coeffs=()):
        coeffs = list(coeffs)
        lo = 0
        while lo < len(coeffs) and coeffs[lo] == 0:
            lo += 1
        hi = len(coeffs)
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self.offset = 0
            self.coeffs = ()
        else:
            self.offset = offset + lo
            self.coeffs = tuple(coeffs[lo:hi])

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zero() -> "QPoly":
        return QPoly(0, ())

    @staticmethod
    def one() -> "QPoly":
        return QPoly(0, (1,))

    @staticmethod
    def const(c: int) -> "QPoly":
        return QPoly(0, (c,))

    @staticmethod
    def monomial(exp: int, c: int = 1) -> "QPoly":
        return QPoly(exp, (c,))

    @staticmethod
    def from_dict(d: dict) -> "QPoly":
        if not d:
            return QPoly.zero()
        lo, hi = min(d), max(d)
        return QPoly(lo, [d.get(e, 0) for e in range(lo, hi + 1)])

    def to_dict(self) -> dict:
        return {self.offset + i: c for i, c in enumerate(self.coeffs) if c}

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree data")
        return self.offset

    @property
    def max_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree data")
        return self.offset + len(self.coeffs) - 1

    def __getitem__(self, exp: int) -> int:
        i = exp - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QPoly.const(other)
        return (
            isinstance(other, QPoly)
            and self.offset == other.offset
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.offset, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> "QPoly":
        if isinstance(other, int):
            other = QPoly.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self.coeffs), other.offset + len(other.coeffs))
        out = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            out[self.offset - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.offset - lo + i] += c
        return QPoly(lo, out)

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly(self.offset, [-c for c in self.coeffs])

    def __sub__(self, other) -> "QPoly":
        if isinstance(other, int):
            other = QPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "QPoly":
        return (-self) + other

    def __mul__(self, other) -> "QPoly":
        if isinstance(other, int):
            if other == 0:
                return QPoly.zero()
            return QPoly(self.offset, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return QPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(self.offset + other.offset, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPoly":
        """Multiply by q^k."""
        return QPoly(self.offset + k, self.coeffs)

    def reverse_q(self) -> "QPoly":
        """Substitute q -> 1/q."""
        return QPoly(-self.offset - len(self.coeffs) + 1, self.coeffs[::-1])

    def __call__(self, q):
        """Evaluate at an integer or Fraction q (q != 0 if offset < 0)."""
        return sum(c * q ** (self.offset + i) for i, c in enumerate(self.coeffs))

    def coeff_ge(self, other) -> bool:
        """Coefficientwise self >= other."""
        if isinstance(other, int):
            other = QPoly.const(other)
        d = self - other
        return all(c >= 0 for c in d.coeffs)

    # -- display -----------------------------------------------------------
    def __repr__(self):
        return f"QPoly({format_qpoly(self)!r})"


def format_qpoly(p: QPoly) -> str:
    if p.is_zero():
        return "0"
    return f"q^{p.offset}*({','.join(str(c) for c in p.coeffs)})"


_QPOLY_RE = re.compile(r"^q\^(-?\d+)\*\(((?:-?\d+)(?:,-?\d+)*)\)$")


def parse_qpoly(text: str) -> QPoly:
    text = text.strip()
    if text == "0":
        return QPoly.zero()
    m = _QPOLY_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse QPoly {text!r}")
    return QPoly(int(m.group(1)), [int(c) for c in m.group(2).split(",")])


def qpoly_json(p: QPoly) -> dict:
    return {"offset": p.offset, "coeffs": list(p.coeffs)}


def qpoly_from_json(d: dict) -> QPoly:
    return QPoly(int(d["offset"]), [int(c) for c in d["coeffs"]])


# --- q-binomial families ------------------------------------------------------

def qint(n: int) -> QPoly:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    if n <= 0:
        return QPoly.zero()
    return QPoly(0, (1,) * n)


def qbinom(n: int, k: int) -> QPoly:
    """Gaussian binomial [n k]_q; zero outside 0 <= k <= n."""
    if k < 0 or k > n:
        return QPoly.zero()
    k = min(k, n - k)
    num = QPoly.one()
    for i in range(k):
        num = num * qint(n - i)
    den = QPoly.one()
    for i in range(1, k + 1):
        den = den * qint(i)
    return _exact_div(num, den)


def qmultinomial(n: int, parts) -> QPoly:
    """[n; parts]_q, zero if the parts do not sum to n."""
    parts = list(parts)
    if sum(parts) != n:
        return QPoly.zero()
    out = QPoly.one()
    rest = n
    for m in parts:
        out = out * qbinom(rest, m)
        rest -= m
    return out


def _exact_div(num: QPoly, den: QPoly) -> QPoly:
    """Exact division of polynomials (raises if not exact)."""
    if num.is_zero():
        return QPoly.zero()
    nc = list(num.coeffs)
    dc = list(den.coeffs)
    out = [0] * (len(nc) - len(dc) + 1)
    for i in range(len(out) - 1, -1, -1):
        c, r = divmod(nc[i + len(dc) - 1], dc[-1])
        if r:
            raise ValueError("inexact polynomial division")
        out[i] = c
        if c:
            for j, d in enumerate(dc):
                nc[i + j] -= c * d
    if any(nc[: len(dc) - 1]):
        raise ValueError("inexact polynomial division")
    return QPoly(num.offset - den.offset, out)


def gen_gaussian(N: int, lam) -> QPoly:
    """Generalized q-Gaussian [N; lam]_q = q^(-n(lam)) s_lam(1,q,...,q^(N-1)).

    Computed by the content/hook product; zero when l(lam) > N.
    """
    lam = shapes.strip_zeros(shapes.check_partition(lam))
    if N < 0:
        raise ValueError("N must be >= 0")
    if len(lam) > N:
        return QPoly.zero()
    conj = shapes.conjugate(lam)
    num = QPoly.one()
    den = QPoly.one()
    for r, row in enumerate(lam, start=1):
        for c in range(1, row + 1):
            content = c - r
            hook = (row - c) + (conj[c - 1] - r) + 1
            num = num * (QPoly.one() - QPoly.monomial(N + content))
            den = den * (QPoly.one() - QPoly.monomial(hook))
    return _exact_div(num, den)


def b_poly(n: int, k: int) -> QPoly:
    """B_q(n;k) = sum_{j=0}^{n-k} C(j+k-1, j) q^j, defined for n >= k >= 1."""
    if k < 1 or n < k:
        raise ValueError(f"b_poly needs n >= k >= 1, got ({n},{k})")
    return QPoly(0, [comb(j + k - 1, j) for j in range(n - k + 1)])


# --- bivariate helpers (polynomials in q and t) -------------------------------

BiPoly = dict  # (q_exp, t_exp) -> int


def bipoly_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (qa, ta), ca in a.items():
        for (qb, tb), cb in b.items():
            key = (qa + qb, ta + tb)
            v = out.get(key, 0) + ca * cb
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


def bipoly_from_factors(js) -> BiPoly:
    """prod_{j in js} (1 - q^j t) as a bivariate polynomial."""
    out: BiPoly = {(0, 0): 1}
    for j in js:
        out = bipoly_mul(out, {(0, 0): 1, (j, 1): -1})
    return out


def bipoly_t_slices(p: BiPoly) -> dict[int, QPoly]:
    """Split a bivariate polynomial into {t_exp: QPoly in q}."""
    rows: dict[int, dict] = {}
    for (qe, te), c in p.items():
        rows.setdefault(te, {})[qe] = c
    return {te: QPoly.from_dict(d) for te, d in sorted(rows.items())}


def format_bipoly(p: BiPoly) -> str:
    slices = bipoly_t_slices(p)
    if not slices:
        return "0"
    parts = []
    for te in sorted(slices):
        qp = format_qpoly(slices[te])
        parts.append(qp if te == 0 else f"{qp}*t^{te}")
    return " + ".join(parts)


# --- rational fitting ---------------------------------------------------------

@dataclass
class RationalFit:
    """Fitted P(q,t) / prod_{j in J} (1 - q^j t) for a q-polynomial series."""

    J: tuple[int, ...]
    P: BiPoly
    t_power: int
    P_t: tuple[int, ...]
    verified_terms: int

    def numerator_slices(self) -> dict[int, QPoly]:
        return bipoly_t_slices(self.P)

    def expand(self, n_terms: int) -> list[QPoly]:
        """Power-series expansion of P/Q to n_terms coefficients in t."""
        qk = _denominator_tcoeffs(self.J)
        p = bipoly_t_slices(self.P)
        out: list[QPoly] = []
        for m in range(n_terms):
            s = p.get(m, QPoly.zero())
            for k in range(1, min(m, len(qk) - 1) + 1):
                s = s - qk[k] * out[m - k]
            out.append(s)
        return out


class NoFitError(ValueError):
    """No rational fit of the required shape within the degree budget."""


def _denominator_tcoeffs(J) -> list[QPoly]:
    """t-coefficients of prod (1-q^j t) as QPolys [q_0=1, q_1, ...]."""
    coeffs = [QPoly.one()]
    for j in J:
        nxt = [QPoly.zero()] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k] = nxt[k] + c
            nxt[k + 1] = nxt[k + 1] - c.shift(j)
        coeffs = nxt
    return coeffs


def _t_divides(P: BiPoly, j: int) -> bool:
    """Does (1 - q^j t) divide the bivariate polynomial P?"""
    slices = bipoly_t_slices(P)
    if not slices:
        return True
    top = max(slices)
    quo = slices.get(0, QPoly.zero())
    for te in range(1, top + 1):
        quo = slices.get(te, QPoly.zero()) + quo.shift(j)
    return quo.is_zero()


def _peel(series: list[QPoly], j: int) -> list[QPoly]:
    """Multiply the series by (1 - q^j t)."""
    out = [series[0]]
    for m in range(1, len(series)):
        out.append(series[m] - series[m - 1].shift(j))
    return out


def fit_rational(series: list[QPoly], max_den: int | None = None,
                 jmax: int | None = None) -> RationalFit:
    """Fit sum series[n] t^n = P(q,t) / prod_{j in J}(1 - q^j t).

    Searches denominator degrees d = 1, 2, ... and, within each d,
    candidate multisets J in lexicographic order, by peeling factors
    (1 - q^j t) off the series; a peel sequence fits when the residual
    terms beyond t-degree L-d-2 all vanish (the surviving head is the
    numerator).  P and Q are certified coprime by checking that no factor
    of Q divides P.  Raises NoFitError when the supplied terms support no
    admissible fit.
    """
    series = [s if isinstance(s, QPoly) else QPoly.const(s) for s in series]
    L = len(series)
    if L < 3:
        raise NoFitError("need at least 3 series terms")
    if series[0] != QPoly.one():
        raise NoFitError("series must start with constant term 1")
    if jmax is None:
        growth = [1]
        for a, b in zip(series, series[1:]):
            if not a.is_zero() and not b.is_zero():
                growth.append(b.max_exp - a.max_exp)
        jmax = max(growth)
    top_d = L - 2 if max_den is None else min(max_den, L - 2)
    for d in range(1, top_d + 1):
        np_allow = L - d - 2
        found = _peel_search(series, d, 0, jmax, np_allow)
        if found is None:
            continue
        js, residual = found
        P: BiPoly = {}
        for m, s in enumerate(residual[: np_allow + 1]):
            for qe, c in s.to_dict().items():
                if c:
                    P[(qe, m)] = c
        if any(_t_divides(P, j) for j in set(js)):
            continue  # not coprime: a smaller denominator exists
        fit = RationalFit(J=js, P=P, t_power=0, P_t=(), verified_terms=L)
        if fit.expand(L) != series:
            raise AssertionError("peel fit failed to re-expand (bug)")
        t_power, P_t = _strip_one_minus_t(_numerator_at_q1(P))
        fit.t_power = t_power
        fit.P_t = P_t
        return fit
    raise NoFitError(
        f"no (1-q^j t)-shaped fit with denominator degree <= {top_d}; "
        "supply more terms or raise the degree budget"
    )


def _peel_search(series, depth, j_min, jmax, np_allow):
    """Find the lexicographically smallest non-decreasing multiset of size
    `depth` whose peels kill every term beyond np_allow."""
    if depth == 0:
        if all(s.is_zero() for s in series[np_allow + 1:]):
            return (), series
        return None
    for j in range(j_min, jmax + 1):
        peeled = _peel(series, j)
        sub = _peel_search(peeled, depth - 1, j, jmax, np_allow)
        if sub is not None:
            js, residual = sub
            return (j,) + js, residual
    return None


def _numerator_at_q1(P: BiPoly) -> list[int]:
    slices = bipoly_t_slices(P)
    top = max(slices) if slices else 0
    return [slices.get(te, QPoly.zero())(1) for te in range(top + 1)]


def _strip_one_minus_t(coeffs: list[int]) -> tuple[int, tuple[int, ...]]:
    """Write the integer polynomial as (1-t)^s * rest with rest(1) != 0."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if all(v == 0 for v in c):
        return 0, (0,)
    s = 0
    while sum(c) == 0:
        # divide by (1 - t)
        out = []
        acc = 0
        for v in c[:-1]:
            acc = v + acc
            out.append(acc)
        c = out if out else [0]
        s += 1
    return s, tuple(c)


# --- polynomial fitting (finite differences) ----------------------------------

@dataclass
class PolyFit:
    """Polynomial (rational coefficients) matching a tail of sample values."""

    coefficients: tuple[Fraction, ...]  # ascending powers
    valid_from: int

    def __call__(self, n: int) -> Fraction:
        return sum(c * n**i for i, c in enumerate(self.coefficients))


class NotEventuallyPolynomial(ValueError):
    pass


def fit_polynomial(values: list[int], start_index: int = 0) -> PolyFit:
    """Find the earliest suffix fit exactly by one polynomial.

    values[i] is the sample at argument start_index + i.  The fit needs at
    least two more samples than the polynomial degree, so the difference
    table must show at least two trailing zero levels of evidence.
    """
    L = len(values)
    for s in range(L - 1):
        tail = values[s:]
        diffs = [list(tail)]
        while len(diffs[-1]) > 1 and any(diffs[-1]):
            last = diffs[-1]
            diffs.append([b - a for a, b in zip(last, last[1:])])
        if any(diffs[-1]):
            continue  # never reached a zero level: not polynomial on this tail
        deg = len(diffs) - 2
        if deg < 0:
            deg = 0
        if len(tail) < deg + 2:
            continue
        coeffs = _newton_to_monomial(
            [level[0] for level in diffs[: deg + 1]], start_index + s
        )
        fit = PolyFit(tuple(coeffs), start_index + s)
        if all(fit(start_index + s + i) == v for i, v in enumerate(tail)):
            return fit
    raise NotEventuallyPolynomial(
        "no suffix of the samples is matched exactly by a polynomial"
    )


def _newton_to_monomial(leading_diffs, x0: int):
    """Convert Newton forward-difference coefficients at base x0 to monomial
    coefficients: f(x) = sum_k d_k * C(x - x0, k)."""
    out = [Fraction(0)] * (len(leading_diffs) + 1)
    basis = [Fraction(1)]  # C(x-x0, 0) = 1
    for k, dk in enumerate(leading_diffs):
        for i, b in enumerate(basis):
            out[i] += dk * b
        # basis <- basis * (x - x0 - k) / (k + 1)
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b
            nxt[i] += b * (-x0 - k)
        basis = [b / (k + 1) for b in nxt]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out
