"""Independent reference implementations used only by the tests.

Everything here is built straight from the channel definition (explicit
state paths or explicit per-pattern matrix chains constructed inline), so
agreement with the library is a genuine cross-check, not a tautology.
Pattern index convention: bit t (LSB) of the integer index is position t+1.
"""

import itertools
import math

import numpy as np


def state_path_probability(alpha, beta, eps0, eps1, pattern, start_good=None):
    """P(pattern) as an explicit sum over all hidden state paths."""
    pg = beta / (alpha + beta) if start_good is None else start_good
    trans = {(0, 0): 1.0 - alpha, (0, 1): alpha, (1, 0): beta, (1, 1): 1.0 - beta}
    eps = (eps0, eps1)
    n = len(pattern)
    total = 0.0
    for s0 in (0, 1):
        p0 = pg if s0 == 0 else 1.0 - pg
        if p0 == 0.0:
            continue
        for states in itertools.product((0, 1), repeat=n):
            p = p0
            prev = s0
            for e, s in zip(pattern, states):
                p *= trans[prev, s]
                p *= eps[s] if e else 1.0 - eps[s]
                prev = s
            total += p
    return total


def state_count_distribution(alpha, beta, n, start_good):
    """P(r bad states among n, end state), by enumerating all state paths.

    Returns arrays (good, bad) indexed by r.
    """
    trans = {(0, 0): 1.0 - alpha, (0, 1): alpha, (1, 0): beta, (1, 1): 1.0 - beta}
    good = np.zeros(n + 1)
    bad = np.zeros(n + 1)
    for s0 in (0, 1):
        p0 = start_good if s0 == 0 else 1.0 - start_good
        if p0 == 0.0:
            continue
        if n == 0:
            (good if s0 == 0 else bad)[0] += p0
            continue
        for states in itertools.product((0, 1), repeat=n):
            p = p0
            prev = s0
            for s in states:
                p *= trans[prev, s]
                prev = s
            r = sum(states)
            (good if states[-1] == 0 else bad)[r] += p
    return good, bad


def pattern_bits(n):
    """(2^n, n) array of all erasure patterns; row index bit t = position t+1."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def all_pattern_probs(alpha, beta, eps0, eps1, n, start_good=None):
    """Probability of every pattern of length n, one forward pass per position."""
    pg = beta / (alpha + beta) if start_good is None else start_good
    psi = np.array([[1.0 - alpha, beta], [alpha, 1.0 - beta]])
    erase = np.diag([eps0, eps1]) @ psi
    deliver = psi - erase
    bits = pattern_bits(n)
    v = np.tile(np.array([pg, 1.0 - pg]), (1 << n, 1))
    for t in range(n):
        flag = bits[:, t : t + 1].astype(bool)
        v = np.where(flag, v @ erase.T, v @ deliver.T)
    return v.sum(axis=1)


def weights_and_spans(bits):
    w = bits.sum(axis=1)
    any_one = bits.any(axis=1)
    first = bits.argmax(axis=1)
    last = bits.shape[1] - 1 - bits[:, ::-1].argmax(axis=1)
    sp = np.where(any_one, last - first + 1, 0)
    return w, sp


def segment_weight_mask(bits, lengths, weight_sets):
    """Rows whose per-segment erasure counts land in the given sets.

    weight_sets entries are sets of ints, or None for unconstrained.
    """
    mask = np.ones(bits.shape[0], dtype=bool)
    pos = 0
    for length, ws in zip(lengths, weight_sets):
        seg_w = bits[:, pos : pos + length].sum(axis=1)
        if ws is not None:
            mask &= np.isin(seg_w, sorted(ws))
        pos += length
    assert pos == bits.shape[1]
    return mask


def memoryless_rand_burst(n, a, b, eps):
    """P(weight > a and span > b) for i.i.d. erasures, by direct counting."""
    total = 0.0
    for w in range(max(a + 1, 2), n + 1):
        for s in range(max(b + 1, w), n + 1):
            count = (n - s + 1) * math.comb(s - 2, w - 2)
            total += count * eps**w * (1.0 - eps) ** (n - w)
    return total
