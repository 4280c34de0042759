"""Block-erasure probabilities of classical block codes over the channel.

Three decoders on a length-n block: correct any a erasures (p_rand),
correct one erasure burst of span <= b (p_burst), and correct patterns
that satisfy either criterion (p_rand_burst). Each failure probability is
exact, assembled from windowed products over the hidden state.
"""

from __future__ import annotations

import numpy as np

from .channel import GEParams, stationary_vector
from .counts import FREE, Segment, weight_transfer_table, window_product
from .errors import ConsistencyError, ParameterError

PROB_SLACK = 1e-12  # tolerated floating-point excursion outside [0, 1]


def check_probability(x: float, what: str, tol: float = PROB_SLACK) -> float:
    """Clamp x into [0, 1] if it is within tol of the interval, else raise."""
    if -tol <= x <= 1.0 + tol:
        return min(max(float(x), 0.0), 1.0)
    raise ConsistencyError(f"{what} = {x!r} is not a probability (tolerance {tol})")


def _check_block(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"block length n must be an integer >= 1, got {n!r}")


def _check_count(name: str, value: int, hi: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0 or value > hi:
        raise ParameterError(f"{name} must be an integer in [0, {hi}], got {value!r}")


def p_rand(ge: GEParams, n: int, a: int) -> float:
    """P(more than a erasures in a stationary block of n)."""
    _check_block(n)
    _check_count("a", a, n)
    if a == n:
        return 0.0
    tail = weight_transfer_table(ge, n)[n, a + 1 :].sum(axis=0) @ stationary_vector(ge)
    return check_probability(float(tail.sum()), f"p_rand(n={n}, a={a})")


def _first_burst_prob(ge: GEParams, n: int, b: int, i: int) -> float:
    # patterns whose first erasure is at position i with all erasures inside [i, i+b-1]
    bp = min(b, n - i + 1)
    segs = []
    if i > 1:
        segs.append(Segment(i - 1, {0}))
    segs.append(Segment(1, {1}))
    if bp > 1:
        segs.append(Segment(bp - 1, FREE))
    tail = n - i - bp + 1
    if tail > 0:
        segs.append(Segment(tail, {0}))
    return window_product(ge, segs)


def p_burst(ge: GEParams, n: int, b: int) -> float:
    """P(the erasures in a stationary block of n do not fit one span-b burst).

    b = 0 admits only the all-zero pattern.
    """
    _check_block(n)
    _check_count("b", b, n)
    zero = window_product(ge, [Segment(n, {0})])
    if b == 0:
        return check_probability(1.0 - zero, f"p_burst(n={n}, b=0)")
    covered = zero + sum(_first_burst_prob(ge, n, b, i) for i in range(1, n + 1))
    return check_probability(1.0 - covered, f"p_burst(n={n}, b={b})")


def p_weight_and_span(ge: GEParams, n: int, a: int, b: int) -> float:
    """P(weight <= a AND span <= b), stationary block of n.

    a = 0 or b = 0 degenerate to the all-zero pattern only.
    """
    _check_block(n)
    _check_count("a", a, n)
    _check_count("b", b, n)
    if a > b:
        raise ParameterError(f"need a <= b (weight above span is vacuous), got a={a} b={b}")
    total = window_product(ge, [Segment(n, {0})])
    if a == 0 or b == 0:
        return check_probability(total, f"p_weight_and_span(n={n}, a={a}, b={b})")
    for i in range(1, n + 1):
        bp = min(b, n - i + 1)
        segs = []
        if i > 1:
            segs.append(Segment(i - 1, {0}))
        segs.append(Segment(1, {1}))
        if bp > 1:
            # at most a-1 further erasures, all inside the burst window
            segs.append(Segment(bp - 1, frozenset(range(0, min(a - 1, bp - 1) + 1))))
        tail = n - i - bp + 1
        if tail > 0:
            segs.append(Segment(tail, {0}))
        total += window_product(ge, segs)
    return check_probability(total, f"p_weight_and_span(n={n}, a={a}, b={b})")


def p_rand_burst(ge: GEParams, n: int, a: int, b: int) -> float:
    """P(failure of the combined decoder: weight > a AND span > b).

    Inclusion-exclusion over the two correctable sets; collapses to p_burst
    at a = 1 and to p_rand at a = b.
    """
    value = p_rand(ge, n, a) + p_burst(ge, n, b) - 1.0 + p_weight_and_span(ge, n, a, b)
    return check_probability(value, f"p_rand_burst(n={n}, a={a}, b={b})")
