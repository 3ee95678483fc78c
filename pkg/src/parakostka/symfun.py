"""Symmetric group characters, Littlewood-Richardson numbers, internal
products, L-polynomials and small-scale plethysm.

Class sums run over partitions weighted by 1/z_rho, never over group
elements; all arithmetic is exact (integers, Fractions internally for
plethysm with integrality asserted at the end).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .qalg import QPoly
from .shapes import (
    dot_orbit_sorted,
    check_partition,
    conjugate,
    contains,
    length,
    pad,
    partitions_of,
    strip_zeros,
)


def z_order(rho) -> int:
    """Centralizer order prod i^{m_i} m_i! of a cycle type."""
    mult: dict[int, int] = {}
    for part in rho:
        if part > 0:
            mult[part] = mult.get(part, 0) + 1
    out = 1
    for i, m in mult.items():
        out *= i**m * factorial(m)
    return out


@lru_cache(maxsize=500000)
def _character(lam, rho) -> int:
    """Murnaghan-Nakayama over beta-numbers, removing rho[0] first."""
    if not rho:
        return 1 if not lam else 0
    r = rho[0]
    rest = rho[1:]
    L = len(lam)
    beta = tuple(lam[i] + (L - 1 - i) for i in range(L))  # strictly decreasing
    total = 0
    bset = set(beta)
    for idx, b in enumerate(beta):
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        new_beta = sorted((set(beta) - {b}) | {nb}, reverse=True)
        m = len(new_beta)
        new_lam = tuple(new_beta[i] - (m - 1 - i) for i in range(m))
        new_lam = strip_zeros(new_lam)
        total += (-1) ** height * _character(new_lam, rest)
    return total


def character(lam, rho) -> int:
    """Irreducible symmetric group character chi^lam at cycle type rho."""
    lam = strip_zeros(check_partition(lam))
    rho = strip_zeros(check_partition(rho))
    if sum(lam) != sum(rho):
        raise ValueError(f"|lam|={sum(lam)} != |rho|={sum(rho)}")
    return _character(lam, tuple(sorted(rho, reverse=True)))


# --- Littlewood-Richardson ------------------------------------------------------

@lru_cache(maxsize=500000)
def _lr_coeff(lam, mu, nu) -> int:
    """LR tableaux of shape nu/lam, content mu, lattice reverse reading word."""
    if not contains(lam, nu):
        return 0
    rows = len(nu)
    lam = pad(lam, rows)
    # fill rows top to bottom; entries right-to-left must keep the word lattice
    mu_len = len(mu)

    def rec(row, prev_row_entries, counts, placed):
        if row == rows:
            return 1
        lo, hi = lam[row], nu[row]
        width = hi - lo

        def fill(col, last_letter, counts, acc):
            # col runs right to left: positions hi-1 down to lo
            if col < lo:
                return rec(row + 1, acc, counts, placed)
            total = 0
            for letter in range(1, mu_len + 1):
                if letter > 1 and counts[letter - 1] + 1 > counts[letter - 2]:
                    continue  # lattice condition on the reverse reading word
                if counts[letter - 1] + 1 > mu[letter - 1]:
                    continue
                if last_letter is not None and letter > last_letter:
                    continue  # weakly increasing along the row (left to right)
                above = prev_row_entries.get(col) if row > 0 else None
                if above is not None and letter <= above:
                    continue  # strictly increasing down columns
                new_counts = list(counts)
                new_counts[letter - 1] += 1
                total += fill(col - 1, letter, tuple(new_counts), {**acc, col: letter})
            return total

        return fill(hi - 1, None, counts, {})

    return rec(0, {}, (0,) * mu_len, 0)


def lr_coeff(lam, mu, nu) -> int:
    """Littlewood-Richardson number c_{lam,mu}^{nu}."""
    lam = strip_zeros(check_partition(lam))
    mu = strip_zeros(check_partition(mu))
    nu = strip_zeros(check_partition(nu))
    if sum(nu) != sum(lam) + sum(mu):
        return 0
    if not contains(lam, nu) or not contains(mu, nu):
        return 0
    return _lr_coeff(lam, mu, nu)


def schur_product(f: dict, mu) -> dict:
    """Multiply a Schur expansion {partition: coeff} by s_mu."""
    mu = strip_zeros(check_partition(mu))
    out: dict = {}
    for kappa, c in f.items():
        if c == 0:
            continue
        m = sum(kappa) + sum(mu)
        for nu in partitions_of(m, max_len=len(kappa) + len(mu)):
            if not contains(kappa, nu):
                continue
            w = lr_coeff(kappa, mu, nu)
            if w:
                out[nu] = out.get(nu, 0) + c * w
    return {k: v for k, v in out.items() if v}


def lr_multi(lams, nu) -> int:
    """Iterated LR coefficient c^{nu}_{lam^(1),...,lam^(p)}."""
    f = {(): 1}
    for lam in lams:
        f = schur_product(f, lam)
    return f.get(strip_zeros(tuple(nu)), 0)


def skew_schur_expand(outer, inner) -> dict:
    """Schur expansion of the skew Schur function s_{outer/inner}."""
    outer = strip_zeros(check_partition(outer))
    inner = strip_zeros(check_partition(inner))
    if not contains(inner, outer):
        raise ValueError(f"{inner} is not contained in {outer}")
    m = sum(outer) - sum(inner)
    out = {}
    for lam in partitions_of(m, max_len=len(outer)):
        c = lr_coeff(inner, lam, outer)
        if c:
            out[lam] = c
    return out


# --- internal product -------------------------------------------------------------

def _as_skew(diagram):
    """Normalize a partition or (outer, inner) pair to an (outer, inner) pair."""
    if diagram and isinstance(diagram[0], (tuple, list)):
        outer, inner = diagram
    else:
        outer, inner = diagram, ()
    return strip_zeros(check_partition(outer)), strip_zeros(check_partition(inner))


def skew_character(diagram, rho) -> int:
    outer, inner = _as_skew(diagram)
    if not inner:
        return character(outer, rho)
    return sum(c * character(lam, rho) for lam, c in skew_schur_expand(outer, inner).items())


def skew_size(diagram) -> int:
    outer, inner = _as_skew(diagram)
    return sum(outer) - sum(inner)


def internal_g(a, b, gamma) -> int:
    """Kronecker coefficient g_{a,b,gamma} for skew or straight shapes a, b."""
    gamma = strip_zeros(check_partition(gamma))
    n = sum(gamma)
    if skew_size(a) != n or skew_size(b) != n:
        raise ValueError("all three arguments need the same size")
    total = Fraction(0)
    for rho in partitions_of(n):
        total += (
            Fraction(skew_character(a, rho) * skew_character(b, rho) * character(gamma, rho), z_order(rho))
        )
    assert total.denominator == 1
    return int(total)


def internal_product(a, b) -> dict:
    """Schur expansion of s_a * s_b (internal product)."""
    n = skew_size(a)
    if skew_size(b) != n:
        raise ValueError("sizes differ")
    chars = {}
    for rho in partitions_of(n):
        chars[rho] = skew_character(a, rho) * skew_character(b, rho)
    out = {}
    for gamma in partitions_of(n):
        val = Fraction(0)
        for rho, c in chars.items():
            val += Fraction(c * character(gamma, rho), z_order(rho))
        assert val.denominator == 1
        if val:
            out[gamma] = int(val)
    return out


def l_poly(alpha, beta, mu) -> QPoly:
    """L_{alpha,beta}^{mu}(q) = sum_gamma g_{alpha,beta,gamma} K_{gamma,mu}(q)."""
    from .kostka import kf

    mu = strip_zeros(check_partition(mu))
    n = sum(mu)
    if skew_size(alpha) != n or skew_size(beta) != n:
        raise ValueError("sizes differ")
    total = QPoly.zero()
    for gamma, g in internal_product(alpha, beta).items():
        k = kf(gamma, mu)
        if not k.is_zero():
            total = total + g * k
    return total


def l_value_composition(alpha, beta, mu) -> int:
    """L_{alpha,beta}^{mu}(1) for an arbitrary composition mu: the monomial
    coefficient of the internal product, i.e. a Kostka-weighted sum."""
    from .kostka import kostka_number

    total = 0
    for gamma, g in internal_product(alpha, beta).items():
        total += g * kostka_number(gamma, mu)
    return total


# --- extended and restricted LR -----------------------------------------------------

def extended_lr(lam, mu, nu) -> int:
    """Stable Kronecker value: g at first-row-padded partitions, with the
    stability probed one step further (a failed probe is an internal bug
    signal, not a data error)."""
    lam = strip_zeros(check_partition(lam))
    mu = strip_zeros(check_partition(mu))
    nu = strip_zeros(check_partition(nu))
    if sum(lam) + sum(mu) < sum(nu):
        raise ValueError("needs |lam| + |mu| >= |nu|")
    n0 = max(
        sum(lam) + (lam[0] if lam else 0),
        sum(mu) + (mu[0] if mu else 0),
        sum(nu) + (nu[0] if nu else 0),
        1,
    )

    def padded(xs, N):
        return (N - sum(xs),) + xs

    v1 = internal_g(padded(lam, n0), padded(mu, n0), padded(nu, n0))
    v2 = internal_g(padded(lam, n0 + 1), padded(mu, n0 + 1), padded(nu, n0 + 1))
    if v1 != v2:
        raise AssertionError(
            f"stability violated at N0={n0}: {v1} != {v2} (implementation bug)"
        )
    return v1


def stable_l_poly(lam, mu, nu, max_extra: int = 8):
    """Stable limit of L at first-row-padded arguments; returns (poly, N)
    where N is the first padding at which two consecutive values agree."""
    lam = strip_zeros(check_partition(lam))
    mu = strip_zeros(check_partition(mu))
    nu = strip_zeros(check_partition(nu))
    n0 = max(
        sum(lam) + (lam[0] if lam else 0),
        sum(mu) + (mu[0] if mu else 0),
        sum(nu) + (nu[0] if nu else 0),
        1,
    )

    def padded(xs, N):
        return (N - sum(xs),) + xs

    prev = None
    for N in range(n0, n0 + max_extra + 1):
        cur = l_poly(padded(lam, N), padded(mu, N), padded(nu, N))
        if prev is not None and cur == prev:
            return cur, N
        prev = cur
    raise AssertionError("L-polynomial did not stabilize within the probe window")


def restricted_lr(lam, mu, nu, level: int, n: int, box_pad: int = 0) -> int:
    """Level-restricted LR number: alternating sum of c_{lam,mu}^{w o nu}
    over the affine group, acting on nu + delta with translation step
    level + n (the dot action at the given level; the literal step `level`
    breaks the monotone stabilization 0 <= c[1] <= c[2] <= ... = c)."""
    lam = strip_zeros(check_partition(lam))
    mu = strip_zeros(check_partition(mu))
    nu = strip_zeros(check_partition(nu))
    if sum(lam) + sum(mu) != sum(nu):
        raise ValueError("needs |lam| + |mu| = |nu|")
    if length(nu) > n:
        raise ValueError("l(nu) > n")
    step = level + n
    delta = tuple(range(n - 1, -1, -1))
    v0 = tuple(a + d for a, d in zip(pad(nu, n), delta))
    hi = (lam[0] if lam else 0) + (mu[0] if mu else 0) + n + box_pad
    pts = dot_orbit_sorted(v0, step, 0, hi)
    if pts is None:
        return 0
    total = 0
    for v, sign in pts:
        cand = tuple(a - d for a, d in zip(v, delta))
        if cand[-1] < 0:
            continue
        total += sign * lr_coeff(lam, mu, strip_zeros(cand))
    return total


# --- plethysm ---------------------------------------------------------------------

def _p_multiply(f: dict, g: dict) -> dict:
    out: dict = {}
    for r1, c1 in f.items():
        for r2, c2 in g.items():
            key = tuple(sorted(r1 + r2, reverse=True))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def schur_to_powersum(lam) -> dict:
    """p-expansion of a Schur function: {rho: chi^lam(rho)/z_rho}."""
    lam = strip_zeros(check_partition(lam))
    n = sum(lam)
    return {
        rho: Fraction(character(lam, rho), z_order(rho))
        for rho in partitions_of(n)
        if character(lam, rho) != 0
    }


def plethysm(lam, mu, bound: int = 24) -> dict:
    """Schur expansion of the plethysm s_lam o s_mu (integer coefficients)."""
    lam = strip_zeros(check_partition(lam))
    mu = strip_zeros(check_partition(mu))
    n = sum(lam) * sum(mu)
    if n > bound:
        raise ValueError(f"plethysm size {n} exceeds bound {bound}")
    base = schur_to_powersum(mu)
    out_p: dict = {}
    for rho, c in schur_to_powersum(lam).items():
        prod = {(): Fraction(1)}
        for r in rho:
            stretched = {
                tuple(sorted((r * x for x in sigma), reverse=True)): v
                for sigma, v in base.items()
            }
            prod = _p_multiply(prod, stretched)
        for sigma, v in prod.items():
            out_p[sigma] = out_p.get(sigma, Fraction(0)) + c * v
    out = {}
    for pi in partitions_of(n):
        val = sum((c * character(pi, sigma) for sigma, c in out_p.items()), Fraction(0))
        assert val.denominator == 1, (pi, val)
        if val:
            out[pi] = int(val)
    return out
