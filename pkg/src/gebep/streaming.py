"""Delay-constrained streaming codes: exact failure probability and bounds.

A streaming code with parameters (a, b, tau) decodes a block of n packets
if every length-(tau+1) window of the erasure pattern is correctable:
weight at most a, or all erasures packed in a burst of span at most b.
Patterns with that property are called admissible; the block-erasure
probability (BEP) is the stationary probability of the complement.

The exact BEP needs an enumeration over 2^n patterns, so two analytic
bracketing pairs are provided:

  * simple bounds: the combined block decoder on one window (lower) and on
    the whole block (upper);
  * improved bounds: explicit unions of disjoint pattern families, one a
    subset and one a superset of the admissible set, each family evaluated
    exactly with a windowed product. Valid for tau+1 <= n <= tau+b.

Positions are 1-based in all constituent-family indices returned by the
tag functions, matching the window conventions above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .blockcodes import check_probability, p_rand_burst
from .channel import GEParams, as_pattern, stationary_vector, transfer_matrices
from .counts import FREE, Segment, window_product
from .errors import ConsistencyError, ParameterError

DEFAULT_MAX_ENUM = 26  # enumeration guard: 2^26 patterns is the desk-scale ceiling
ORDER_TOL = 1e-10


def _check_code(a: int, b: int, tau: int) -> None:
    for name, v in (("a", a), ("b", b), ("tau", tau)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParameterError(f"{name} must be an integer, got {v!r}")
    if not 1 <= a <= b <= tau:
        raise ParameterError(f"need 1 <= a <= b <= tau, got a={a} b={b} tau={tau}")


@dataclass(frozen=True)
class EscParams:
    """Streaming-code parameters: correct a random erasures or one span-b
    burst in every delay window of tau+1 packets, over blocks of n packets.

    n defaults to the rate-optimal block length tau + 1 - a + b.
    """

    a: int
    b: int
    tau: int
    n: Optional[int] = None

    def __post_init__(self):
        _check_code(self.a, self.b, self.tau)
        n = self.n
        if n is None:
            n = self.tau + 1 - self.a + self.b
            object.__setattr__(self, "n", n)
        if not isinstance(n, int) or isinstance(n, bool) or n < self.tau + 1:
            raise ParameterError(f"need n >= tau + 1, got n={n!r} tau={self.tau}")

    @property
    def in_improved_range(self) -> bool:
        return self.n <= self.tau + self.b


def _require_improved_range(esc: EscParams) -> None:
    if not esc.in_improved_range:
        raise ParameterError(
            f"improved bounds require n <= tau + b, got n={esc.n} tau={esc.tau} b={esc.b}"
        )


# ---------------------------------------------------------------------------
# Admissibility
# ---------------------------------------------------------------------------

def admissible_mask(patterns: np.ndarray, a: int, b: int, tau: int) -> np.ndarray:
    """Vectorized admissibility over a (count, n) array of 0/1 rows."""
    _check_code(a, b, tau)
    arr = np.asarray(patterns)
    if arr.ndim != 2:
        raise ParameterError("patterns must be a 2-d array, one pattern per row")
    n = arr.shape[1]
    if n < tau + 1:
        raise ParameterError(f"need n >= tau + 1, got n={n} tau={tau}")
    ok = np.ones(arr.shape[0], dtype=bool)
    for j in range(n - tau):
        win = arr[:, j : j + tau + 1]
        w = win.sum(axis=1)
        nonzero = w > 0
        first = win.argmax(axis=1)
        last = tau - win[:, ::-1].argmax(axis=1)
        sp = np.where(nonzero, last - first + 1, 0)
        ok &= (w <= a) | (sp <= b)
    return ok


def is_admissible(pattern: Sequence[int], a: int, b: int, tau: int) -> bool:
    """True iff every length-(tau+1) window has weight <= a or span <= b."""
    arr = as_pattern(pattern)
    return bool(admissible_mask(arr[None, :], a, b, tau)[0])


# ---------------------------------------------------------------------------
# Exact BEP by enumeration
# ---------------------------------------------------------------------------

def _batch_pattern_probs(ge: GEParams, bits: np.ndarray) -> np.ndarray:
    mats = transfer_matrices(ge)
    v = np.tile(stationary_vector(ge), (bits.shape[0], 1))
    for t in range(bits.shape[1]):
        erased = bits[:, t : t + 1].astype(bool)
        v = np.where(erased, v @ mats.erase.T, v @ mats.deliver.T)
    return v.sum(axis=1)


def exact_bep(ge: GEParams, esc: EscParams, max_enum: int = DEFAULT_MAX_ENUM) -> float:
    """Exact block-erasure probability by enumerating all 2^n patterns.

    Guarded by max_enum (default 26) since cost and memory are 2^n; raise
    the guard explicitly to go beyond.
    """
    n = esc.n
    if n > max_enum:
        raise ParameterError(
            f"exact enumeration guarded at n <= {max_enum}, got n={n}; pass max_enum to override"
        )
    shifts = np.arange(n, dtype=np.int64)
    admissible_total = 0.0
    chunk = 1 << min(n, 18)
    for lo in range(0, 1 << n, chunk):
        idx = np.arange(lo, lo + chunk, dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(np.uint8)
        mask = admissible_mask(bits, esc.a, esc.b, esc.tau)
        admissible_total += float(_batch_pattern_probs(ge, bits[mask]).sum())
    return check_probability(1.0 - admissible_total, f"exact_bep({esc})")


def pep_union_bound(ge: GEParams, esc: EscParams, k: int, max_enum: int = DEFAULT_MAX_ENUM) -> float:
    """Union bound on per-packet erasure probability for a diagonally
    embedded code carrying k source packets per block: min(1, k * BEP)."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ParameterError(f"k must be an integer >= 1, got {k!r}")
    return min(1.0, k * exact_bep(ge, esc, max_enum=max_enum))


# ---------------------------------------------------------------------------
# Constituent-family membership (used to materialize the bound sets)
# ---------------------------------------------------------------------------

def _pattern_for(esc: EscParams, pattern: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    arr = as_pattern(pattern)
    if arr.size != esc.n:
        raise ParameterError(f"pattern length {arr.size} does not match n={esc.n}")
    prefix = np.concatenate([[0], np.cumsum(arr)])
    return arr, prefix


def upper_set_tags(pattern: Sequence[int], esc: EscParams) -> list[tuple]:
    """All correctable-subset families containing the pattern.

    Families: ("weight",) for total weight <= a; ("run", i, length) for a
    solid run of `length` <= a erasures starting at i followed by bounded
    stragglers; ("burst", i, span) for a heavier-than-a burst of exact span
    starting at i with a clean guard window after it. A correct
    construction makes these pairwise disjoint, so at most one tag returns.
    """
    _require_improved_range(esc)
    a, b, tau, n = esc.a, esc.b, esc.tau, esc.n
    e, pre = _pattern_for(esc, pattern)

    def w(lo: int, hi: int) -> int:  # weight of 1-based closed interval, empty if hi < lo
        if hi < lo:
            return 0
        return int(pre[hi] - pre[lo - 1])

    tags = []
    if w(1, n) <= a:
        tags.append(("weight",))
    for i in range(1, n - tau):
        if w(1, i - 1) != 0:
            continue
        for run_len in range(1, a + 1):
            if w(i, i + run_len - 1) != run_len or e[i + run_len - 1] != 0:
                continue  # e[i + run_len - 1] is 1-based position i + run_len
            x = w(i + run_len + 1, tau + i)
            t = w(tau + i + 1, n)
            if x <= a - run_len and a - x - run_len < t <= run_len:
                tags.append(("run", i, run_len))
    for i in range(1, n - a + 1):
        if w(1, i - 1) != 0 or e[i - 1] != 1:
            continue
        for sp in range(a + 1, min(n - i + 1, b) + 1):
            if (
                e[i + sp - 2] == 1
                and w(i + sp, min(i + sp + tau - a, n)) == 0
                and w(i, i + sp - 1) > a
            ):
                tags.append(("burst", i, sp))
    return tags


def upper_set_tag(pattern: Sequence[int], esc: EscParams):
    """Unique correctable-subset family of the pattern, or None."""
    tags = upper_set_tags(pattern, esc)
    if len(tags) > 1:
        raise ConsistencyError(f"correctable-subset families overlap: {tags}")
    return tags[0] if tags else None


def lower_set_tags(pattern: Sequence[int], esc: EscParams) -> list[tuple]:
    """All superset families containing the pattern.

    Families: ("clear",) for no erasure in the first window; ("sparse", i)
    for first erasure at i with at most a-1 others across the first window
    and the post-burst stretch; ("burst", i) for a heavier-than-a burst at
    the first erasure position with clean guard stretches. The burst family
    requires the erasure at i itself (a strictly smaller family than the
    windowed-span condition alone), which keeps the families disjoint
    without losing any admissible pattern.
    """
    _require_improved_range(esc)
    a, b, tau, n = esc.a, esc.b, esc.tau, esc.n
    e, pre = _pattern_for(esc, pattern)

    def w(lo: int, hi: int) -> int:
        if hi < lo:
            return 0
        return int(pre[hi] - pre[lo - 1])

    tags = []
    if w(1, tau + 1) == 0:
        tags.append(("clear",))
    for i in range(1, tau + 2):
        if w(1, i - 1) != 0 or e[i - 1] != 1:
            continue
        straggler_positions = set(range(i + 1, tau + 2)) | set(
            range(i + b, min(i + tau, n) + 1)
        )
        stragglers = sum(int(e[j - 1]) for j in straggler_positions)
        if stragglers <= a - 1:
            tags.append(("sparse", i))
    for i in range(1, tau + 2 - a):
        if w(1, i - 1) != 0 or e[i - 1] != 1:
            continue
        bm = min(b, tau + 2 - i)
        if (
            w(i, i + bm - 1) > a
            and w(i + bm, tau + 1) == 0
            and w(i + b, min(i + tau, n)) == 0
        ):
            tags.append(("burst", i))
    return tags


def lower_set_tag(pattern: Sequence[int], esc: EscParams):
    """Unique superset family of the pattern, or None."""
    tags = lower_set_tags(pattern, esc)
    if len(tags) > 1:
        raise ConsistencyError(f"superset families overlap: {tags}")
    return tags[0] if tags else None


# ---------------------------------------------------------------------------
# Improved bounds: one windowed product per constituent family
# ---------------------------------------------------------------------------

def _upper_set_probability(ge: GEParams, esc: EscParams) -> float:
    a, b, tau, n = esc.a, esc.b, esc.tau, esc.n
    total = window_product(ge, [Segment(n, frozenset(range(a + 1)))])
    # run families: zeros | run of run_len | single 0 | x stragglers | tail set
    for i in range(1, n - tau):
        for run_len in range(1, a + 1):
            for x in range(0, min(a - run_len, tau - run_len) + 1):
                t_lo = a - x - run_len + 1
                t_hi = min(run_len, n - tau - i)
                if t_lo > t_hi:
                    continue
                segs = []
                if i > 1:
                    segs.append(Segment(i - 1, {0}))
                segs.append(Segment(run_len, {run_len}))
                segs.append(Segment(1, {0}))
                if tau - run_len > 0:
                    segs.append(Segment(tau - run_len, {x}))
                segs.append(Segment(n - tau - i, frozenset(range(t_lo, t_hi + 1))))
                total += window_product(ge, segs)
    # heavy-burst families: zeros | 1 | interior >= a-1 | 1 | guard zeros | free
    for i in range(1, n - a + 1):
        for sp in range(a + 1, min(n - i + 1, b) + 1):
            guard_end = min(i + sp + tau - a, n)
            segs = []
            if i > 1:
                segs.append(Segment(i - 1, {0}))
            segs.append(Segment(1, {1}))
            if sp > 2:
                segs.append(Segment(sp - 2, frozenset(range(a - 1, sp - 1))))
            segs.append(Segment(1, {1}))
            guard = guard_end - (i + sp) + 1
            if guard > 0:
                segs.append(Segment(guard, {0}))
            if n - guard_end > 0:
                segs.append(Segment(n - guard_end, FREE))
            total += window_product(ge, segs)
    return total


def _lower_set_probability(ge: GEParams, esc: EscParams) -> float:
    a, b, tau, n = esc.a, esc.b, esc.tau, esc.n
    segs = [Segment(tau + 1, {0})]
    if n > tau + 1:
        segs.append(Segment(n - tau - 1, FREE))
    total = window_product(ge, segs)
    # sparse families: first erasure at i, <= a-1 stragglers over the first
    # window plus the stretch starting at i+b (merged when they touch)
    for i in range(1, tau + 2):
        head = [Segment(i - 1, {0})] if i > 1 else []
        head.append(Segment(1, {1}))
        i2_lo, i2_hi = i + b, min(i + tau, n)
        i1_len = tau + 1 - i
        if i2_lo > i2_hi:
            segs = list(head)
            if i1_len > 0:
                segs.append(Segment(i1_len, frozenset(range(0, min(a - 1, i1_len) + 1))))
            if n - tau - 1 > 0:
                segs.append(Segment(n - tau - 1, FREE))
            total += window_product(ge, segs)
        elif i2_lo <= tau + 2:
            merged_len = i2_hi - i
            segs = list(head)
            segs.append(Segment(merged_len, frozenset(range(0, min(a - 1, merged_len) + 1))))
            if n - i2_hi > 0:
                segs.append(Segment(n - i2_hi, FREE))
            total += window_product(ge, segs)
        else:
            i2_len = i2_hi - i2_lo + 1
            gap = i2_lo - tau - 2
            for w1 in range(0, min(a - 1, i1_len) + 1):
                segs = list(head)
                if i1_len > 0:
                    segs.append(Segment(i1_len, {w1}))
                if gap > 0:
                    segs.append(Segment(gap, FREE))
                segs.append(Segment(i2_len, frozenset(range(0, min(a - 1 - w1, i2_len) + 1))))
                if n - i2_hi > 0:
                    segs.append(Segment(n - i2_hi, FREE))
                total += window_product(ge, segs)
    # heavy-burst families: 1 at i, interior weight >= a within the capped
    # burst window, clean stretch from i+b, free elsewhere
    for i in range(1, tau + 2 - a):
        bm = min(b, tau + 2 - i)
        if bm - 1 < a:
            continue
        guard_end = min(i + tau, n)
        segs = [Segment(i - 1, {0})] if i > 1 else []
        segs.append(Segment(1, {1}))
        segs.append(Segment(bm - 1, frozenset(range(a, bm))))
        gap = min(i + b - 1, n) - (i + bm) + 1
        if gap > 0:
            segs.append(Segment(gap, FREE))
        if i + b <= n:
            segs.append(Segment(guard_end - (i + b) + 1, {0}))
            if n - guard_end > 0:
                segs.append(Segment(n - guard_end, FREE))
        total += window_product(ge, segs)
    return total


def bep_upper(ge: GEParams, esc: EscParams) -> float:
    """Improved analytic upper bound on the BEP (complement of the
    correctable subset). Requires tau + 1 <= n <= tau + b."""
    _require_improved_range(esc)
    return check_probability(1.0 - _upper_set_probability(ge, esc), f"bep_upper({esc})")


def bep_lower(ge: GEParams, esc: EscParams) -> float:
    """Improved analytic lower bound on the BEP (complement of the
    superset). Requires tau + 1 <= n <= tau + b."""
    _require_improved_range(esc)
    return check_probability(1.0 - _lower_set_probability(ge, esc), f"bep_lower({esc})")


def simple_bounds(ge: GEParams, esc: EscParams) -> tuple[float, float]:
    """(lower, upper) from the combined block decoder on one delay window
    and on the whole block. Valid for any n >= tau + 1."""
    lower = p_rand_burst(ge, esc.tau + 1, esc.a, esc.b)
    upper = p_rand_burst(ge, esc.n, esc.a, esc.b)
    return lower, upper


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsReport:
    """All bounds for one configuration, ordered low to high.

    exact is None when enumeration was not requested or not affordable.
    """

    lower_simple: float
    lower_improved: float
    exact: Optional[float]
    upper_improved: float
    upper_simple: float

    def validate(self, tol: float = ORDER_TOL) -> None:
        chain = [self.lower_simple, self.lower_improved]
        if self.exact is not None:
            chain.append(self.exact)
        chain += [self.upper_improved, self.upper_simple]
        for left, right in zip(chain, chain[1:]):
            if right < left - tol:
                raise ConsistencyError(f"bounds out of order beyond {tol}: {self}")


def build_bounds_report(
    ge: GEParams,
    esc: EscParams,
    with_exact: bool = False,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> BoundsReport:
    """Compute simple and improved bounds (plus the exact value on request)
    and verify their ordering before returning."""
    lower_simple, upper_simple = simple_bounds(ge, esc)
    report = BoundsReport(
        lower_simple=lower_simple,
        lower_improved=bep_lower(ge, esc),
        exact=exact_bep(ge, esc, max_enum=max_enum) if with_exact else None,
        upper_improved=bep_upper(ge, esc),
        upper_simple=upper_simple,
    )
    report.validate()
    return report
