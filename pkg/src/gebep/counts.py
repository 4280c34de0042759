"""Erasure-count and state-count statistics, and the windowed product engine.

Everything here is joint over the hidden state so results compose: the
central object is the 2x2 "weight transfer" matrix T(L, w) whose (s', s)
entry is P(w erasures over L consecutive positions, end state s' | start
state s). Chaining such matrices over a partition of a block (Segment list)
yields the probability that each window carries a prescribed number of
erasures, which is how every bound in this package is evaluated.

Two independent computation routes are kept on purpose:
  * a forward DP over positions (default, numerically benign), and
  * closed forms built from the series coefficients of the chain's
    resolvent (count_series_coeff), used for cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .channel import GEParams, _check_start, stationary_vector, transfer_matrices, transition_matrix_power
from .errors import ParameterError

# Closed-form paths evaluate binomial sums; cap their size so exact-integer
# binomials stay cheap to convert. The DP paths have no such limit.
MAX_CLOSED_FORM_N = 1024

FREE = None  # sentinel: segment weight is unconstrained


def _check_n(n: int, lo: int = 0) -> None:
    if not isinstance(n, int) or n < lo:
        raise ParameterError(f"window length must be an integer >= {lo}, got {n!r}")


def _check_closed_form_n(n: int) -> None:
    if n > MAX_CLOSED_FORM_N:
        raise ParameterError(
            f"closed-form route supports n <= {MAX_CLOSED_FORM_N}, got {n}; use the recursion/DP route"
        )


def _check_pi(pi: float) -> None:
    if isinstance(pi, bool) or not isinstance(pi, (int, float)) or math.isnan(pi) or not 0.0 <= pi <= 1.0:
        raise ParameterError(f"current-state probability must lie in [0, 1], got {pi!r}")


# ---------------------------------------------------------------------------
# Series coefficients of the resolvent (building block for state counts)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _series_table(alpha: float, beta: float, n: int) -> np.ndarray:
    """Table of count_series_coeff values for all lengths <= n, by recursion."""
    abar, bbar = 1.0 - alpha, 1.0 - beta
    rho = 1.0 - alpha - beta
    m = np.zeros((n + 1, n + 2))  # m[length, count]; extra column keeps slicing simple
    m[0, 0] = 1.0
    for ln in range(1, n + 1):
        m[ln, 0] = abar * m[ln - 1, 0]
        m[ln, 1 : ln + 1] = abar * m[ln - 1, 1 : ln + 1] + bbar * m[ln - 1, 0:ln]
        if ln >= 2:
            m[ln, 1 : ln + 1] -= rho * m[ln - 2, 0:ln]
    m.setflags(write=False)
    return m


def _series_coeff_exact(alpha: float, beta: float, n: int, r: int) -> Fraction:
    """Closed form of the series coefficient, in exact rational arithmetic.

    The sum alternates through (alpha + beta - 1)^(n-a) factors and cancels
    catastrophically in doubles when alpha + beta is small, so this
    cross-validation route works over the exact binary rationals of the
    inputs and rounds once on return.
    """
    fa, fb = Fraction(alpha), Fraction(beta)
    abar, bbar = 1 - fa, 1 - fb
    amb = fa - bbar  # alpha + beta - 1
    total = Fraction(0)
    for a_idx in range(max(r, n - r), n + 1):
        coeff = math.comb(a_idx, r) * math.comb(r, n - a_idx)
        total += coeff * amb ** (n - a_idx) * bbar ** (a_idx - n + r) * abar ** (a_idx - r)
    return total


def count_series_coeff(ge: GEParams, n: int, r: int, method: str = "recursion") -> float:
    """Coefficient, at (length n, bad-state count r), of the series from which
    the state-count probabilities are assembled.

    Satisfies m(0,0) = 1 and
    m(n,r) = (1-alpha) m(n-1,r) + (1-beta) m(n-1,r-1) - (1-alpha-beta) m(n-2,r-1),
    with m = 0 outside 0 <= r <= n. method="recursion" runs that DP;
    method="closed" evaluates the equivalent binomial sum exactly.
    """
    _check_n(n)
    if not isinstance(r, int) or r < 0 or r > n:
        raise ParameterError(f"count r must be an integer in [0, n], got r={r!r} n={n}")
    if method == "recursion":
        return float(_series_table(ge.alpha, ge.beta, n)[n, r])
    if method == "closed":
        _check_closed_form_n(n)
        return float(_series_coeff_exact(ge.alpha, ge.beta, n, r))
    raise ParameterError(f"method must be 'recursion' or 'closed', got {method!r}")


# ---------------------------------------------------------------------------
# State-count and erasure-count probabilities
# ---------------------------------------------------------------------------

def state_count_probs(ge: GEParams, n: int, r: int, pi: float) -> tuple[float, float]:
    """P(exactly r bad states among the next n, ending good / ending bad).

    `pi` is the probability that the *current* state (before the first of
    the n transitions) is good. Always evaluated through the series
    coefficients; n = 0 returns (pi, 1-pi) at r = 0.
    """
    _check_n(n)
    _check_pi(pi)
    if not isinstance(r, int) or r < 0 or r > n:
        raise ParameterError(f"count r must be an integer in [0, n], got r={r!r} n={n}")
    m = _series_table(ge.alpha, ge.beta, n)
    m_n_r = m[n, r]
    m_p_r = m[n - 1, r] if n >= 1 and r <= n - 1 else 0.0
    m_p_rm = m[n - 1, r - 1] if n >= 1 and r >= 1 else 0.0
    pibar = 1.0 - pi
    good = pi * m_n_r + ge.beta * pibar * m_p_r - (1.0 - ge.beta) * pi * m_p_rm
    bad = pibar * m_n_r - (1.0 - ge.alpha) * pibar * m_p_r + ge.alpha * pi * m_p_rm
    return float(good), float(bad)


@lru_cache(maxsize=64)
def weight_transfer_table(ge: GEParams, n: int) -> np.ndarray:
    """All weight transfer matrices up to length n.

    Returns a read-only (n+1, n+1, 2, 2) array W with W[L, w] = T(L, w);
    entries with w > L are zero. Built by the forward recursion
    T(L, w) = deliver @ T(L-1, w) + erase @ T(L-1, w-1), T(0, 0) = I.
    """
    _check_n(n)
    mats = transfer_matrices(ge)
    table = np.zeros((n + 1, n + 1, 2, 2))
    table[0, 0] = np.eye(2)
    for ln in range(1, n + 1):
        table[ln, : ln + 1] = mats.deliver @ table[ln - 1, : ln + 1]
        table[ln, 1 : ln + 1] += mats.erase @ table[ln - 1, 0:ln]
    table.setflags(write=False)
    return table


def erasure_count_probs(
    ge: GEParams, n: int, k: int, pi: float, method: str = "dp"
) -> tuple[float, float]:
    """P(exactly k erasures among the next n positions, ending good / bad).

    method="dp" (default) reads the weight transfer table. method="closed"
    mixes state_count_probs with binomial emission counts: conditioned on r
    bad states, j of the k erasures fall on bad positions and the rest on
    good ones. Both routes agree to ~1e-12; tests enforce 1e-10.
    """
    _check_n(n)
    _check_pi(pi)
    if not isinstance(k, int) or k < 0 or k > n:
        raise ParameterError(f"erasure count k must be an integer in [0, n], got k={k!r} n={n}")
    if method == "dp":
        vec = weight_transfer_table(ge, n)[n, k] @ np.array([pi, 1.0 - pi])
        return float(vec[0]), float(vec[1])
    if method != "closed":
        raise ParameterError(f"method must be 'dp' or 'closed', got {method!r}")
    _check_closed_form_n(n)
    e0, e1 = ge.eps0, ge.eps1
    e0bar, e1bar = 1.0 - e0, 1.0 - e1
    good = bad = 0.0
    for r in range(n + 1):
        sg, sb = state_count_probs(ge, n, r, pi)
        if sg == 0.0 and sb == 0.0:
            continue
        emit = 0.0
        for j in range(max(0, k + r - n), min(r, k) + 1):
            emit += (
                math.comb(r, j)
                * math.comb(n - r, k - j)
                * e0bar ** (n + j - k - r)
                * e0 ** (k - j)
                * e1bar ** (r - j)
                * e1**j
            )
        good += emit * sg
        bad += emit * sb
    return float(good), float(bad)


def erasure_count_pmf(ge: GEParams, n: int, k: int) -> float:
    """P(exactly k erasures in a stationary-start block of n positions)."""
    g, b = erasure_count_probs(ge, n, k, ge.pi_good)
    return g + b


# ---------------------------------------------------------------------------
# Windowed products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A run of consecutive positions with a constraint on its erasure count.

    weights is FREE (no constraint) or a nonempty set of admitted counts,
    each within [0, length].
    """

    length: int
    weights: frozenset | None = FREE

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 1:
            raise ParameterError(f"segment length must be an integer >= 1, got {self.length!r}")
        if self.weights is FREE:
            return
        ws = frozenset(self.weights)
        if not ws:
            raise ParameterError("segment weight set must be nonempty (or FREE)")
        for w in ws:
            if not isinstance(w, int) or isinstance(w, bool) or w < 0 or w > self.length:
                raise ParameterError(
                    f"segment weights must be integers in [0, length]; got {w!r} with length {self.length}"
                )
        object.__setattr__(self, "weights", ws)


def window_product(ge: GEParams, segments: Sequence[Segment], start=None) -> float:
    """Probability that each segment, in order, carries an admitted count.

    Chains, from `start` (stationary when omitted), one 2x2 matrix per
    segment: the i-step transition matrix for FREE segments, otherwise the
    sum of T(length, w) over the admitted w. The segment lengths partition
    the block, so the result is an exact probability of the corresponding
    pattern set.
    """
    if not segments:
        raise ParameterError("window_product needs at least one segment")
    segs = list(segments)
    for seg in segs:
        if not isinstance(seg, Segment):
            raise ParameterError(f"segments must be Segment instances, got {seg!r}")
    max_constrained = max((s.length for s in segs if s.weights is not FREE), default=0)
    table = weight_transfer_table(ge, max_constrained) if max_constrained else None
    v = stationary_vector(ge) if start is None else _check_start(start)
    for seg in segs:
        if seg.weights is FREE:
            v = transition_matrix_power(ge, seg.length) @ v
        else:
            q = table[seg.length, sorted(seg.weights)].sum(axis=0)
            v = q @ v
    return float(v.sum())
