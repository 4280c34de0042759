"""Code-parameter selection against a target failure probability.

Scans (a, b) pairs at the rate-optimal block length n = tau + 1 - a + b,
declares a pair feasible when its analytic upper bound clears the target,
and keeps the highest-rate feasible pair. Rates are exact rationals so
ties break deterministically (smallest b, then smallest a).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .channel import GEParams
from .errors import ParameterError
from .streaming import EscParams, bep_upper

FAMILIES = ("esc", "mds", "burst")


def optimal_rate(a: int, b: int, tau: int) -> Fraction:
    """Highest achievable rate (tau+1-a) / (tau+1-a+b), as an exact rational."""
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (a, b, tau)):
        raise ParameterError(f"a, b, tau must be integers, got {a!r}, {b!r}, {tau!r}")
    if not 1 <= a <= b <= tau:
        raise ParameterError(f"need 1 <= a <= b <= tau, got a={a} b={b} tau={tau}")
    return Fraction(tau + 1 - a, tau + 1 - a + b)


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a parameter scan.

    When feasible is False the fields describe the pair with the smallest
    upper bound found, i.e. how close the scan got to the target.
    """

    a: int
    b: int
    n: int
    k: int
    rate: Fraction
    bound_value: float
    feasible: bool


def family_pairs(tau: int, family: str) -> list[tuple[int, int]]:
    """(a, b) candidates of a code family: full scan, a = b, or a = 1."""
    if family == "esc":
        return [(a, b) for a in range(1, tau + 1) for b in range(a, tau + 1)]
    if family == "mds":
        return [(a, a) for a in range(1, tau + 1)]
    if family == "burst":
        return [(1, b) for b in range(1, tau + 1)]
    raise ParameterError(f"family must be one of {FAMILIES}, got {family!r}")


def _check_target(p_th: float) -> None:
    if isinstance(p_th, bool) or not isinstance(p_th, (int, float)) or not 0.0 <= p_th <= 1.0:
        raise ParameterError(f"target probability must lie in [0, 1], got {p_th!r}")


def _best_from(
    scored: Iterable[tuple[int, int, Fraction, float]], p_th: float, tau: int
) -> SelectionResult:
    best = None
    best_key = None
    closest = None
    for a, b, rate, bound in scored:
        result = SelectionResult(
            a=a, b=b, n=tau + 1 - a + b, k=tau + 1 - a, rate=rate, bound_value=bound, feasible=True
        )
        if closest is None or bound < closest.bound_value:
            closest = replace(result, feasible=False)
        if bound <= p_th:
            key = (rate, -b, -a)
            if best_key is None or key > best_key:
                best, best_key = result, key
    if best is not None:
        return best
    if closest is None:
        raise ParameterError("no candidate pairs to select from")
    return closest


def score_pairs(ge: GEParams, tau: int, pairs: Sequence[tuple[int, int]]):
    """Upper bound and exact rate for each (a, b) at rate-optimal n."""
    out = []
    for a, b in pairs:
        esc = EscParams(a, b, tau)
        out.append((a, b, optimal_rate(a, b, tau), bep_upper(ge, esc)))
    return out


def select_best(ge: GEParams, tau: int, p_th: float, family: str = "esc") -> SelectionResult:
    """Highest-rate (a, b) whose analytic upper bound is <= p_th.

    Ties break toward smaller b, then smaller a. Returns feasible=False
    with the closest pair when nothing clears the target.
    """
    if not isinstance(tau, int) or isinstance(tau, bool) or tau < 1:
        raise ParameterError(f"tau must be an integer >= 1, got {tau!r}")
    _check_target(p_th)
    return _best_from(score_pairs(ge, tau, family_pairs(tau, family)), p_th, tau)


@dataclass(frozen=True)
class SweepRow:
    eps: float
    p_th: float
    family: str
    result: SelectionResult


def sweep(
    ge: GEParams,
    eps_values: Sequence[float],
    tau: int,
    p_th_values: Sequence[float],
    families: Sequence[str] = FAMILIES,
) -> list[SweepRow]:
    """select_best over a grid of channel eps0 values and targets.

    Row order is deterministic: eps (given order), then target, then
    family. Bounds are computed once per eps and shared across targets.
    """
    if not isinstance(tau, int) or isinstance(tau, bool) or tau < 1:
        raise ParameterError(f"tau must be an integer >= 1, got {tau!r}")
    for p_th in p_th_values:
        _check_target(p_th)
    pair_sets = {family: family_pairs(tau, family) for family in families}
    rows = []
    for eps in eps_values:
        geps = replace(ge, eps0=float(eps))
        scored = {}
        for entry in score_pairs(geps, tau, family_pairs(tau, "esc")):
            scored[entry[0], entry[1]] = entry
        for p_th in p_th_values:
            for family in families:
                picks = [scored[pair] for pair in pair_sets[family]]
                rows.append(
                    SweepRow(
                        eps=float(eps),
                        p_th=float(p_th),
                        family=family,
                        result=_best_from(picks, p_th, tau),
                    )
                )
    return rows
