"""Gilbert-Elliott packet-erasure channel.

Two hidden states, good (0) and bad (1). Per step the state moves with
P(good -> bad) = alpha and P(bad -> good) = beta, then the packet sent in
that step is erased with probability eps0 (good) or eps1 (bad). A step is
"transition then emit": the erasure flag of position t is driven by the
state occupied *after* the t-th transition. Unless stated otherwise the
chain starts from its stationary distribution.

State vectors are length-2 arrays (P(good), P(bad)). One-step matrices are
2x2, column-stochastic, indexed [next_state, current_state].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ParameterError

Pattern = Sequence[int]  # 0 = delivered, 1 = erased; position 1 is element 0


def _check_unit(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ParameterError(f"{name} must be a real number, got {value!r}")
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class GEParams:
    """Channel parameters (alpha, beta, eps0, eps1), all in [0, 1].

    alpha + beta must be positive so the stationary distribution exists.
    """

    alpha: float
    beta: float
    eps0: float
    eps1: float

    def __post_init__(self):
        for name in ("alpha", "beta", "eps0", "eps1"):
            _check_unit(name, getattr(self, name))
        if self.alpha + self.beta == 0.0:
            raise ParameterError("alpha + beta must be positive (alpha = beta = 0 has no unique stationary state)")

    @property
    def pi_good(self) -> float:
        """Stationary probability of the good state, beta / (alpha + beta)."""
        return self.beta / (self.alpha + self.beta)


class TransferMatrices(NamedTuple):
    full: np.ndarray         # one-step state transition matrix
    erasure_diag: np.ndarray  # diag(eps0, eps1)
    deliver: np.ndarray      # step restricted to "packet delivered"
    erase: np.ndarray        # step restricted to "packet erased"


def transition_matrix(ge: GEParams) -> np.ndarray:
    """One-step transition matrix [[1-alpha, beta], [alpha, 1-beta]]."""
    return np.array([[1.0 - ge.alpha, ge.beta], [ge.alpha, 1.0 - ge.beta]])


def transfer_matrices(ge: GEParams) -> TransferMatrices:
    """Transition matrix, erasure diagonal, and its deliver/erase split.

    deliver + erase == full, so each column of (deliver, erase) jointly
    carries the full transition mass.
    """
    full = transition_matrix(ge)
    erasure_diag = np.diag([ge.eps0, ge.eps1])
    erase = erasure_diag @ full
    deliver = full - erase
    return TransferMatrices(full, erasure_diag, deliver, erase)


def stationary_vector(ge: GEParams) -> np.ndarray:
    return np.array([ge.pi_good, 1.0 - ge.pi_good])


def transition_matrix_power(ge: GEParams, i: int) -> np.ndarray:
    """i-step transition matrix in closed form.

    With rho = 1 - alpha - beta and mu = alpha / (alpha + beta) the power is
    [[1 - mu(1-rho^i), (1-mu)(1-rho^i)], [mu(1-rho^i), 1 - (1-mu)(1-rho^i)]],
    which avoids repeated multiplication for long erasure-free gaps.
    """
    if not isinstance(i, int) or i < 0:
        raise ParameterError(f"matrix power needs an integer i >= 0, got {i!r}")
    rho = 1.0 - ge.alpha - ge.beta
    mu = ge.alpha / (ge.alpha + ge.beta)
    decay = 1.0 - rho**i
    return np.array(
        [[1.0 - mu * decay, (1.0 - mu) * decay], [mu * decay, 1.0 - (1.0 - mu) * decay]]
    )


def as_pattern(pattern: Pattern) -> np.ndarray:
    """Validate and return an erasure pattern as a 0/1 integer array."""
    arr = np.asarray(pattern)
    if arr.ndim != 1 or arr.size < 1:
        raise ParameterError("an erasure pattern must be a nonempty 1-d sequence")
    if not np.issubdtype(arr.dtype, np.number) and arr.dtype != np.bool_:
        raise ParameterError(f"pattern entries must be 0/1, got dtype {arr.dtype}")
    arr = arr.astype(np.int64)
    if not np.all((arr == 0) | (arr == 1)):
        raise ParameterError("pattern entries must be 0 or 1")
    return arr


def weight(pattern: Pattern) -> int:
    """Number of erased positions."""
    return int(as_pattern(pattern).sum())


def span(pattern: Pattern) -> int:
    """Distance from first to last erasure inclusive; 0 for the all-zero pattern."""
    arr = as_pattern(pattern)
    idx = np.flatnonzero(arr)
    if idx.size == 0:
        return 0
    return int(idx[-1] - idx[0] + 1)


def _check_start(start) -> np.ndarray:
    v = np.asarray(start, dtype=float)
    if v.shape != (2,) or np.any(v < 0) or abs(v.sum() - 1.0) > 1e-12:
        raise ParameterError(f"start must be a length-2 distribution, got {start!r}")
    return v


def pattern_probability(ge: GEParams, pattern: Pattern, start=None) -> float:
    """Exact probability of observing the given erasure pattern.

    Chains the deliver/erase matrices position by position from `start`
    (stationary when omitted) and sums the final state mass.
    """
    arr = as_pattern(pattern)
    v = stationary_vector(ge) if start is None else _check_start(start)
    mats = transfer_matrices(ge)
    step = (mats.deliver, mats.erase)
    for bit in arr:
        v = step[int(bit)] @ v
    return float(v.sum())


def sample_blocks(ge: GEParams, n: int, trials: int, seed: int) -> np.ndarray:
    """Draw `trials` independent stationary-start blocks of n erasure flags.

    Returns a (trials, n) uint8 array. Uses numpy's counter-based Philox
    generator; the draw layout is fixed (one uniform for the initial state,
    then per position one transition uniform followed by one emission
    uniform), so a given seed reproduces the array bit-for-bit.
    """
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"block length n must be an integer >= 1, got {n!r}")
    if not isinstance(trials, int) or trials < 1:
        raise ParameterError(f"trials must be an integer >= 1, got {trials!r}")
    rng = np.random.Generator(np.random.Philox(seed))
    state = (rng.random(trials) >= ge.pi_good).astype(np.uint8)  # 1 = bad
    eps = np.array([ge.eps0, ge.eps1])
    out = np.empty((trials, n), dtype=np.uint8)
    for t in range(n):
        u = rng.random(trials)
        state = np.where(state == 0, u < ge.alpha, u >= ge.beta).astype(np.uint8)
        out[:, t] = rng.random(trials) < eps[state]
    return out


def sample_block(ge: GEParams, n: int, seed: int) -> np.ndarray:
    """Single stationary-start block; equals sample_blocks(ge, n, 1, seed)[0]."""
    return sample_blocks(ge, n, 1, seed)[0]
