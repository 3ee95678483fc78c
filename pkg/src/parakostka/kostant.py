"""Parabolic q-Kostant partition functions.

Three evaluators are provided: a direct matrix enumeration (the ground
truth, works for any root subset), the peel-last-coordinate recurrence,
and a flow DP used as the fast path by higher layers.  They agree
everywhere; the test suite pins this down exhaustively on small data.
"""

from __future__ import annotations

import os
from math import comb

from .qalg import QPoly, b_poly, qint
from .shapes import (
    block_bounds,
    block_of,
    check_composition,
    in_y,
    phi_set,
    y_membership,
)


def _cache_cap() -> int:
    return int(os.environ.get("PARAKOSTKA_CACHE_CAP", "1000000"))


class _Cache(dict):
    """Dict with a crude size cap; cleared wholesale when full."""

    def put(self, key, value):
        if len(self) >= _cache_cap():
            self.clear()
        self[key] = value
        return value


_rec_cache = _Cache()


def clear_caches() -> None:
    _rec_cache.clear()


def _check_weight(gamma, n: int):
    gamma = tuple(int(x) for x in gamma)
    if len(gamma) != n:
        raise ValueError(f"weight length {len(gamma)} != {n}")
    if sum(gamma) != 0:
        raise ValueError(f"weight must sum to zero: {gamma}")
    return gamma


# --- direct enumeration over an arbitrary root subset -------------------------

def kostant_enum(sigma, gamma) -> QPoly:
    """Sum of q^{magnitude} over flow matrices for the pair set sigma.

    sigma is any set of pairs (i, j) with 1 <= i < j <= n; gamma is an
    integer vector of sum zero.  Each matrix assigns m_{ij} >= 0 with net
    outflow gamma_i at every i; magnitude is the total of all m_{ij}.
    """
    gamma = tuple(int(x) for x in gamma)
    if sum(gamma) != 0:
        raise ValueError(f"weight must sum to zero: {gamma}")
    n = len(gamma)
    pairs = sorted(sigma, key=lambda ij: (ij[1], ij[0]))
    for i, j in pairs:
        if not (1 <= i < j <= n):
            raise ValueError(f"bad pair {(i, j)} for n={n}")
    deadline = {}
    for t, (i, j) in enumerate(pairs):
        deadline[i] = t
        deadline[j] = t
    for i in range(1, n + 1):
        if i not in deadline and gamma[i - 1] != 0:
            return QPoly.zero()

    res = list(gamma)
    out: dict[int, int] = {}

    def rec(t: int, mag: int):
        if t == len(pairs):
            out[mag] = out.get(mag, 0) + 1
            return
        i, j = pairs[t]
        ri = res[i - 1]
        if ri < 0:
            return
        last_out_i = deadline[i] == t or all(p[0] != i for p in pairs[t + 1:])
        lo = hi = ri
        if not last_out_i:
            lo = 0
        for m in range(lo, hi + 1):
            res[i - 1] -= m
            res[j - 1] += m
            ok = True
            if deadline[i] == t and res[i - 1] != 0:
                ok = False
            if deadline[j] == t and res[j - 1] != 0:
                ok = False
            if ok:
                rec(t + 1, mag + m)
            res[i - 1] += m
            res[j - 1] -= m

    if all(r == 0 for r in res) or pairs:
        rec(0, 0)
    return QPoly.from_dict(out)


def kostant_enum_eta(eta, gamma) -> QPoly:
    eta = check_composition(eta)
    gamma = _check_weight(gamma, sum(eta))
    return kostant_enum(phi_set(eta), gamma)


# --- peeling recurrence --------------------------------------------------------

def _peel(eta):
    if eta[-1] > 1:
        return eta[:-1] + (eta[-1] - 1,)
    return eta[:-1]


def _block_sort(eta, gamma):
    """Sort gamma within each eta-block (the value is block-symmetric)."""
    out = []
    i = 0
    for e in eta:
        out.extend(sorted(gamma[i:i + e], reverse=True))
        i += e
    return tuple(out)


def _canon_key(eta, gamma):
    rev_eta = tuple(reversed(eta))
    rev = (rev_eta, _block_sort(rev_eta, tuple(-g for g in reversed(gamma))))
    return min((eta, gamma), rev)


def kostant_rec(eta, gamma) -> QPoly:
    """Peel-the-last-coordinate recurrence, memoized.

    K(gamma) = q^{-gamma_n} * sum over beta >= 0 supported on the first
    r_{p-1} coordinates with |beta| = -gamma_n of the peeled value; the
    empty sum covers gamma_n > 0.
    """
    eta = check_composition(eta)
    if any(e <= 0 for e in eta):
        raise ValueError(f"eta must have positive parts: {eta}")
    gamma = _check_weight(gamma, sum(eta))
    return _kostant_rec(eta, gamma)


def _kostant_rec(eta, gamma) -> QPoly:
    n = len(gamma)
    if n == 1:
        return QPoly.one() if gamma[0] == 0 else QPoly.zero()
    gamma = _block_sort(eta, gamma)
    # definitional necessary conditions: the net flow over every block
    # boundary is non-negative, block-1 entries only emit, the last block
    # only absorbs
    if gamma[eta[0] - 1] < 0 or gamma[n - eta[-1]] > 0:
        return QPoly.zero()
    prefix = 0
    pos = 0
    for e in eta[:-1]:
        pos += e
        prefix += sum(gamma[pos - e:pos])
        if prefix < 0:
            return QPoly.zero()
    key = _canon_key(eta, gamma)
    hit = _rec_cache.get(key)
    if hit is not None:
        return hit
    # peel the cheaper end; the reversal symmetry keeps the value
    if gamma[0] < -gamma[-1]:
        eta_w = tuple(reversed(eta))
        gamma_w = _block_sort(eta_w, tuple(-g for g in reversed(gamma)))
    else:
        eta_w, gamma_w = eta, gamma
    return _rec_cache.put(key, _peel_last(eta_w, gamma_w))


def _peel_last(eta, gamma) -> QPoly:
    need = -gamma[-1]
    if need < 0:
        return QPoly.zero()
    r_prev = sum(eta) - eta[-1]
    sub_eta = _peel(eta)
    tail = gamma[r_prev:-1]
    # feasibility caps for beta: entries in the first block stay non-negative,
    # and no prefix of gamma - beta at a block boundary may go negative
    r = block_bounds(eta)
    prefix = [0]
    for g in gamma:
        prefix.append(prefix[-1] + g)
    bound_at = {}
    for m in range(1, len(eta)):
        if r[m] <= r_prev:
            bound_at[r[m]] = prefix[r[m]]
    r1 = r[1]
    total = QPoly.zero()

    def rec(i: int, left: int, beta_sum: int, acc: tuple):
        nonlocal total
        if i == r_prev:
            if left == 0:
                sub_gamma = tuple(g - b for g, b in zip(gamma[:r_prev], acc)) + tail
                total = total + _kostant_rec(sub_eta, sub_gamma)
            return
        cap = left
        if i < r1:
            cap = min(cap, gamma[i])
            if cap < 0:
                return
        limit = bound_at.get(i + 1)
        for b in range(cap + 1):
            if limit is not None and beta_sum + b > limit:
                break
            rec(i + 1, left - b, beta_sum + b, acc + (b,))

    rec(0, need, 0, ())
    return total.shift(need)


# --- degree / leading data ------------------------------------------------------

def delta_phi(eta) -> tuple[int, ...]:
    """Weight vector with entry p-k on block k; s(gamma,eta) = <gamma, delta>."""
    eta = check_composition(eta)
    p = len(eta)
    return tuple((p - k) for k, e in enumerate(eta, start=1) for _ in range(e))


def kostant_degree(eta, gamma) -> tuple[bool, int]:
    """(nonzero, degree): nonzero iff gamma in Y_eta; degree is
    sum_k (p-k) * (block-k sum)."""
    eta = check_composition(eta)
    gamma = _check_weight(gamma, sum(eta))
    nz = in_y(gamma, eta)
    deg = sum(d * g for d, g in zip(delta_phi(eta), gamma))
    return nz, deg


# --- closed forms for small l(eta) ----------------------------------------------

def transportation_count(lam, mu) -> int:
    """Number of non-negative integer matrices with row sums lam, column
    sums mu (zero when any prescribed sum is negative)."""
    lam, mu = list(lam), list(mu)
    if any(x < 0 for x in lam) or any(x < 0 for x in mu):
        return 0
    if sum(lam) != sum(mu):
        return 0
    if not lam:
        return 1 if sum(mu) == 0 else 0

    def rec(row: int, cols: tuple[int, ...]) -> int:
        if row == len(lam):
            return 1 if all(c == 0 for c in cols) else 0
        total = 0

        def fill(j: int, left: int, cols_now):
            nonlocal total
            if j == len(cols_now) - 1:
                if left <= cols_now[j]:
                    nxt = cols_now[:j] + (cols_now[j] - left,)
                    total += rec(row + 1, nxt)
                return
            for take in range(min(left, cols_now[j]) + 1):
                fill(j + 1, left - take, cols_now[:j] + (cols_now[j] - take,) + cols_now[j + 1:])

        fill(0, lam[row], tuple(cols))
        return total

    return rec(0, tuple(mu))


def kostant_closed(eta, gamma) -> QPoly | None:
    """Closed forms for l(eta) <= 4; None when no printed case applies."""
    eta = check_composition(eta)
    gamma = _check_weight(gamma, sum(eta))
    p = len(eta)
    membership = y_membership(gamma, eta)
    if p == 2:
        lam = gamma[: eta[0]]
        mu = tuple(-g for g in gamma[eta[0]:])
        cnt = transportation_count(lam, mu)
        return QPoly.monomial(sum(x for x in lam), cnt) if cnt else QPoly.zero()
    if eta == (1, 1, 1):
        if membership == "outside":
            return QPoly.zero()
        g1, g12 = gamma[0], gamma[0] + gamma[1]
        return qint(min(g1, g12) + 1).shift(max(g1, g12))
    if p == 3:
        if membership != "in_Y_plus":
            return None
        out = QPoly.monomial(-gamma[-1])
        for j in range(eta[0]):
            out = out * b_poly(gamma[j] + eta[1], eta[1])
        return out
    if p == 4 and eta[0] == 1:
        if membership != "in_Y_plus":
            return None
        e2, e3 = eta[1], eta[2]
        total = QPoly.zero()

        def betas(k: int, left: int):
            if k == 1:
                yield (left,)
                return
            for first in range(left + 1):
                for rest in betas(k - 1, left - first):
                    yield (first,) + rest

        for beta in betas(e2 + 1, gamma[0]):
            term = b_poly(beta[0] + e3, e3)
            for j in range(2, e2 + 2):
                term = term * b_poly(beta[j - 1] + gamma[j - 1] + e3, e3).shift(
                    beta[j - 1]
                )
            total = total + term
        return total.shift(-gamma[-1])
    return None


# --- dominant chamber ------------------------------------------------------------

def _l_vector(eta) -> tuple[int, ...]:
    """l_i = eta_{k+1} + ... + eta_{p-1} for i in block k, k = 1..p-2."""
    p = len(eta)
    out = []
    for k in range(1, p - 1):
        li = sum(eta[k:p - 1])
        out.extend([li] * eta[k - 1])
    return tuple(out)


def _bounded_compositions(total: int, caps):
    """Compositions of total with 0 <= beta_j <= caps[j]."""
    if not caps:
        if total == 0:
            yield ()
        return
    if total > sum(caps):
        return
    head = caps[0]
    for first in range(min(total, head) + 1):
        for rest in _bounded_compositions(total - first, caps[1:]):
            yield (first,) + rest


def dominant_value(eta, gamma) -> int:
    """K_{Phi(eta)}(gamma) at q=1 on the dominant chamber, by the
    binomial-weighted sum over the two-blocks-removed function."""
    eta = check_composition(eta)
    gamma = _check_weight(gamma, sum(eta))
    p = len(eta)
    if p < 3:
        raise ValueError("needs at least three blocks")
    if y_membership(gamma, eta) != "in_Y_plus":
        raise ValueError(f"gamma={gamma} is not in the dominant chamber of {eta}")
    lvec = _l_vector(eta)
    m = len(lvec)  # = r_{p-2}
    hat_eta = eta[: p - 2]
    total = 0
    caps = [gamma[j] + lvec[j] for j in range(m)]
    for beta in _bounded_compositions(sum(lvec), caps):
        inner = tuple(b - l for b, l in zip(beta, lvec))
        k = _kostant_rec(hat_eta, inner)(1)
        if k:
            w = 1
            for j in range(m):
                w *= comb(gamma[j] + lvec[j], beta[j])
            total += k * w
    return total


def qrec_dominant(eta, gamma) -> QPoly:
    """q-analog of the dominant-chamber recurrence: peel the last two blocks
    with B_q factors."""
    eta = check_composition(eta)
    gamma = _check_weight(gamma, sum(eta))
    p = len(eta)
    if p < 3:
        raise ValueError("needs at least three blocks")
    if y_membership(gamma, eta) != "in_Y_plus":
        raise ValueError(f"gamma={gamma} is not in the dominant chamber of {eta}")
    r = block_bounds(eta)
    m, mm = r[p - 2], r[p - 3]
    hat_eta = eta[: p - 2]
    hat_gamma = gamma[:mm] + (0,) * eta[p - 3]  # zero out block p-2
    need = sum(gamma[:mm])
    ep = eta[p - 2]  # eta_{p-1}
    total = QPoly.zero()
    for beta in _bounded_compositions(need, [need] * m):
        inner = tuple(g - b for g, b in zip(hat_gamma, beta))
        k = _kostant_rec(hat_eta, inner)
        if k.is_zero():
            continue
        term = k
        for j in range(mm):
            term = term * b_poly(beta[j] + ep, ep)
        for j in range(mm, m):
            term = term * b_poly(gamma[j] + beta[j] + ep, ep)
        total = total + term
    return total.shift(-gamma[-1])
