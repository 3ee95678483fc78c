"""Partitions, compositions, weights, block data and diagram transforms.

Conventions: a partition/composition is a tuple of non-negative ints;
trailing zeros are significant for compositions (fake length), while
partition-valued results are normalized unless stated otherwise.  All
index pairs in root sets are 1-based, matching the usual notation.
"""

from __future__ import annotations

from itertools import accumulate

Ints = tuple[int, ...]


def check_partition(lam) -> Ints:
    lam = tuple(int(x) for x in lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"negative part in {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"parts not weakly decreasing: {lam}")
    return lam


def check_composition(mu) -> Ints:
    mu = tuple(int(x) for x in mu)
    if any(x < 0 for x in mu):
        raise ValueError(f"negative part in {mu}")
    return mu


def size(mu) -> int:
    return sum(mu)


def length(lam) -> int:
    """Number of nonzero parts (the honest length l)."""
    return sum(1 for x in lam if x != 0)


def strip_zeros(lam) -> Ints:
    """Drop trailing zeros; the partition-normal form."""
    lam = tuple(lam)
    n = len(lam)
    while n and lam[n - 1] == 0:
        n -= 1
    return lam[:n]


def pad(mu, n: int) -> Ints:
    mu = tuple(mu)
    if len(mu) > n:
        if any(mu[n:]):
            raise ValueError(f"cannot pad {mu} down to length {n}")
        return mu[:n]
    return mu + (0,) * (n - len(mu))


def conjugate(lam) -> Ints:
    lam = check_partition(lam)
    lam = strip_zeros(lam)
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x >= i) for i in range(1, lam[0] + 1))


def dominance_ge(lam, mu) -> bool:
    """lam >= mu in dominance; both compositions of equal size."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"sizes differ: |{lam}| != |{mu}|")
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def n_stat(lam) -> int:
    """n(lam) = sum (i-1)*lam_i."""
    return sum(i * x for i, x in enumerate(lam))


def contains(inner, outer) -> bool:
    """inner subseteq outer componentwise."""
    inner, outer = tuple(inner), tuple(outer)
    return all(
        (inner[i] if i < len(inner) else 0) <= (outer[i] if i < len(outer) else 0)
        for i in range(max(len(inner), len(outer)))
    )


def block_bounds(eta) -> Ints:
    """(r_0=0, r_1, ..., r_p) for a composition eta with positive parts."""
    eta = tuple(eta)
    if not eta or any(x <= 0 for x in eta):
        raise ValueError(f"eta must have positive parts: {eta}")
    return (0,) + tuple(accumulate(eta))


def block_of(eta) -> Ints:
    """block_of(eta)[i] = k (1-based) such that r_{k-1} < i+1 <= r_k."""
    out = []
    for k, e in enumerate(tuple(eta), start=1):
        out.extend([k] * e)
    return tuple(out)


def phi_set(eta) -> frozenset[tuple[int, int]]:
    """The root set Phi(eta): pairs (i,j), i <= r_k < j for some k."""
    r = block_bounds(eta)
    n = r[-1]
    blk = block_of(eta)
    return frozenset(
        (i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
        if blk[i - 1] < blk[j - 1]
    )


def y_membership(gamma, eta) -> str:
    """Classify gamma against the cone Y_eta: 'outside', 'in_Y' or 'in_Y_plus'.

    The subset condition of the defining inequalities is evaluated at the
    set of negative entries of the following block, where the minimum over
    subsets is attained.
    """
    gamma = tuple(int(x) for x in gamma)
    r = block_bounds(eta)
    if len(gamma) != r[-1]:
        raise ValueError(f"len(gamma)={len(gamma)} != |eta|={r[-1]}")
    if sum(gamma) != 0:
        raise ValueError(f"gamma must sum to zero: {gamma}")
    p = len(r) - 1
    for k in range(p):
        prefix = sum(gamma[: r[k]])
        worst = sum(x for x in gamma[r[k]: r[k + 1]] if x < 0)
        if prefix + worst < 0:
            return "outside"
    n = len(gamma)
    dominant = all(gamma[i] >= gamma[i + 1] for i in range(n - 2)) and (
        n < 2 or gamma[n - 2] >= 0
    )
    return "in_Y_plus" if dominant else "in_Y"


def in_y(gamma, eta) -> bool:
    return y_membership(gamma, eta) != "outside"


def subdivisions(eta):
    """All subdivisions of eta: concatenations of partitions of each part."""
    eta = tuple(eta)
    if not eta:
        yield ()
        return
    for head in partitions_of(eta[0]):
        for tail in subdivisions(eta[1:]):
            yield tuple(head) + tail


def is_subdivision(eta2, eta1) -> bool:
    """True if eta2 is a subdivision of eta1 (splits each part of eta1)."""
    eta1, eta2 = tuple(eta1), tuple(eta2)
    pos = 0
    for part in eta1:
        got = []
        while pos < len(eta2) and sum(got) < part:
            got.append(eta2[pos])
            pos += 1
        if sum(got) != part or any(got[i] < got[i + 1] for i in range(len(got) - 1)):
            return False
    return pos == len(eta2)


def partitions_of(n: int, max_part: int | None = None, max_len: int | None = None):
    """Yield partitions of n as tuples, largest part first."""
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_of(
            n - first, first, None if max_len is None else max_len - 1
        ):
            yield (first,) + rest


def compositions_of(n: int, k: int):
    """All compositions of n into exactly k non-negative parts."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions_of(n - first, k - 1):
            yield (first,) + rest


def positive_compositions_of(n: int):
    """All compositions of n into positive parts."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in positive_compositions_of(n - first):
            yield (first,) + rest


# --- FFLP diagram transforms -------------------------------------------------

def _pad_common(parts):
    parts = [tuple(p) for p in parts]
    m = max((len(p) for p in parts), default=0)
    return [pad(p, m) for p in parts]


def transform_tilde(tup) -> tuple[Ints, ...]:
    """Interleave-sort a k-tuple of partitions.

    The decreasing rearrangement gamma of all parts is redealt round-robin:
    the j-th output takes gamma_j, gamma_{j+k}, ...  Part multiset is
    preserved.
    """
    tup = _pad_common([check_partition(p) for p in tup])
    k = len(tup)
    if k == 0:
        return ()
    p = len(tup[0])
    gamma = sorted((x for part in tup for x in part), reverse=True)
    return tuple(tuple(gamma[j + i * k] for i in range(p)) for j in range(k))


def transform_star(pair) -> tuple[Ints, Ints]:
    """The row-interleaving transform on an ordered pair of partitions."""
    lam, mu = _pad_common([check_partition(p) for p in pair])
    la = [lam[k] - (k + 1) for k in range(len(lam))]
    mb = [mu[j] - (j + 1) for j in range(len(mu))]
    lam_star = tuple(
        la[k] + sum(1 for b in mb if b >= la[k]) for k in range(len(lam))
    )
    mu_star = tuple(
        mb[j] + 1 + sum(1 for a in la if a > mb[j]) for j in range(len(mu))
    )
    return lam_star, mu_star


def transform_ceil(tup) -> tuple[Ints, ...]:
    """Averaged-rounding transform: j-th output row i is
    floor((sum_s tup[s][i] + k - j) / k).  Column sums are preserved."""
    tup = _pad_common([check_partition(p) for p in tup])
    k = len(tup)
    if k == 0:
        return ()
    p = len(tup[0])
    col = [sum(t[i] for t in tup) for i in range(p)]
    return tuple(
        tuple((col[i] + k - j) // k for i in range(p)) for j in range(1, k + 1)
    )


def transform_tilde_skew(diagrams):
    """Tilde on skew diagrams: outers and inners transformed separately."""
    outers = transform_tilde([d[0] for d in diagrams])
    inners = transform_tilde([d[1] for d in diagrams])
    return tuple(zip(outers, inners))


def transform_star_skew(pair):
    outers = transform_star([pair[0][0], pair[1][0]])
    inners = transform_star([pair[0][1], pair[1][1]])
    return (outers[0], inners[0]), (outers[1], inners[1])


def transform_ceil_skew(diagrams):
    outers = transform_ceil([d[0] for d in diagrams])
    inners = transform_ceil([d[1] for d in diagrams])
    return tuple(zip(outers, inners))


# --- affine symmetric group orbits --------------------------------------------

def affine_signed_orbit(v0, level: int, lo: int, hi: int):
    """Signed orbit of v0 under the group generated by coordinate swaps and
    (x_1,...,x_n) -> (x_n + level, x_2, ..., x_1 - level), restricted to
    vectors with all coordinates in [lo, hi].

    Returns {vector: sign} or None when v0 lies on a reflection wall (the
    full alternating sum then vanishes).  BFS over generators; the box must
    be wide enough that the region of interest is box-connected (tests pin
    this against wider boxes).
    """
    v0 = tuple(int(x) for x in v0)
    n = len(v0)
    if level < 1:
        raise ValueError("level must be >= 1")
    for i in range(n):
        for j in range(i + 1, n):
            if (v0[i] - v0[j]) % level == 0:
                return None
    seen = {v0: 1}
    frontier = [v0]
    while frontier:
        nxt = []
        for v in frontier:
            sign = -seen[v]
            images = []
            for i in range(n - 1):
                if v[i] != v[i + 1]:
                    images.append(v[:i] + (v[i + 1], v[i]) + v[i + 2:])
            images.append((v[-1] + level,) + v[1:-1] + (v[0] - level,))
            for w in images:
                if min(w) < lo or max(w) > hi:
                    continue
                if w in seen:
                    if seen[w] != sign:
                        raise AssertionError("parity conflict: point on wall")
                    continue
                seen[w] = sign
                nxt.append(w)
        frontier = nxt
    return seen


def dot_orbit_sorted(v0, step: int, lo: int, hi: int):
    """Sorted representatives of the orbit of v0 under coordinate
    permutations and translations by step * (sum-zero integer vectors),
    with all coordinates confined to [lo, hi].

    Yields (v_sorted_desc, sign) where sign is the parity of the sorting
    permutation (translations are even).  Returns None when two entries of
    v0 are congruent mod step: v0 then lies on a reflection wall and the
    full alternating sum vanishes.
    """
    v0 = tuple(int(x) for x in v0)
    n = len(v0)
    if step < 1:
        raise ValueError("step must be >= 1")
    for i in range(n):
        for j in range(i + 1, n):
            if (v0[i] - v0[j]) % step == 0:
                return None
    out = []

    def rec(i, beta_sum, acc):
        if i == n:
            if beta_sum != 0:
                return
            v = tuple(v0[j] + step * acc[j] for j in range(n))
            srt = tuple(sorted(v, reverse=True))
            inv = sum(
                1 for a in range(n) for b in range(a + 1, n) if v[a] < v[b]
            )
            out.append((srt, (-1) ** inv))
            return
        b_lo = -((v0[i] - lo) // step)
        b_hi = (hi - v0[i]) // step
        for b in range(b_lo, b_hi + 1):
            rec(i + 1, beta_sum + b, acc + (b,))

    rec(0, 0, ())
    return out


# --- text encodings ----------------------------------------------------------

def parse_ints(text: str) -> Ints:
    """Parse '3,2,1' (empty string -> ())."""
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def parse_tuple(text: str) -> tuple[Ints, ...]:
    """Parse '5,1;4,3,1' into a tuple of int tuples."""
    return tuple(parse_ints(part) for part in text.split(";"))


def parse_skew(text: str) -> tuple[Ints, Ints]:
    """Parse '5,5,2,2/3,1' into (outer, inner); bare '5,2' means inner empty."""
    if "/" in text:
        outer, inner = text.split("/", 1)
        return parse_ints(outer), parse_ints(inner)
    return parse_ints(text), ()


def fmt_ints(mu) -> str:
    return ",".join(str(x) for x in mu)
