import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gebep import (
    ConsistencyError,
    GEParams,
    ParameterError,
    p_burst,
    p_rand,
    p_rand_burst,
    p_weight_and_span,
    pattern_probability,
)
from gebep.blockcodes import check_probability

import oracles

GE_CASES = [
    GEParams(0.2, 0.6, 0.1, 0.9),
    GEParams(1e-4, 0.5, 0.01, 1.0),
    GEParams(0.7, 0.2, 0.5, 0.5),
]


def test_check_probability():
    assert check_probability(0.5, "x") == 0.5
    assert check_probability(-1e-14, "x") == 0.0
    assert check_probability(1.0 + 1e-14, "x") == 1.0
    with pytest.raises(ConsistencyError):
        check_probability(1.1, "x")
    with pytest.raises(ConsistencyError):
        check_probability(-1e-3, "x")


def test_edge_parameter_values():
    ge = GEParams(0.2, 0.6, 0.1, 0.9)
    n = 8
    zero = pattern_probability(ge, [0] * n)
    assert p_rand(ge, n, n) == 0.0
    assert p_rand(ge, n, 0) == pytest.approx(1.0 - zero, abs=1e-13)
    assert p_burst(ge, n, n) == pytest.approx(0.0, abs=1e-12)
    assert p_burst(ge, n, 0) == pytest.approx(1.0 - zero, abs=1e-13)
    assert p_weight_and_span(ge, n, 0, 0) == pytest.approx(zero, abs=1e-13)
    assert p_weight_and_span(ge, n, 0, 3) == pytest.approx(zero, abs=1e-13)
    assert p_weight_and_span(ge, n, n, n) == pytest.approx(1.0, abs=1e-12)
    assert p_rand_burst(ge, n, n, n) == pytest.approx(0.0, abs=1e-12)


def test_domain_errors():
    ge = GEParams(0.2, 0.6, 0.1, 0.9)
    with pytest.raises(ParameterError):
        p_rand(ge, 0, 0)
    with pytest.raises(ParameterError):
        p_rand(ge, 5, 6)
    with pytest.raises(ParameterError):
        p_burst(ge, 5, -1)
    with pytest.raises(ParameterError):
        p_weight_and_span(ge, 5, 3, 2)  # weight budget above span budget


def test_memoryless_closed_forms():
    eps, n = 0.2, 10
    ge = GEParams(0.5, 0.5, eps, eps)
    for a in range(n + 1):
        tail = sum(math.comb(n, w) * eps**w * (1 - eps) ** (n - w) for w in range(a + 1, n + 1))
        assert p_rand(ge, n, a) == pytest.approx(tail, abs=1e-13)
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            ref = oracles.memoryless_rand_burst(n, a, b, eps)
            assert p_rand_burst(ge, n, a, b) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("ge", GE_CASES)
def test_against_enumeration(ge):
    n = 11
    probs = oracles.all_pattern_probs(ge.alpha, ge.beta, ge.eps0, ge.eps1, n)
    w, s = oracles.weights_and_spans(oracles.pattern_bits(n))
    for a in (0, 1, 3, n):
        assert p_rand(ge, n, a) == pytest.approx(float(probs[w > a].sum()), abs=1e-12)
    for b in (0, 1, 4, n):
        assert p_burst(ge, n, b) == pytest.approx(float(probs[s > b].sum()), abs=1e-12)
    for a, b in ((1, 1), (1, 4), (2, 5), (3, 3), (3, 8)):
        ref = float(probs[(w > a) & (s > b)].sum())
        assert p_rand_burst(ge, n, a, b) == pytest.approx(ref, abs=1e-12)
        ref_and = float(probs[(w <= a) & (s <= b)].sum())
        assert p_weight_and_span(ge, n, a, b) == pytest.approx(ref_and, abs=1e-12)


@pytest.mark.parametrize("ge", GE_CASES)
def test_collapse_identities(ge):
    n = 12
    for b in range(1, n + 1):
        assert p_rand_burst(ge, n, 1, b) == pytest.approx(p_burst(ge, n, b), abs=1e-12)
        assert p_rand_burst(ge, n, b, b) == pytest.approx(p_rand(ge, n, b), abs=1e-12)


@given(
    st.floats(1e-4, 1.0), st.floats(1e-4, 1.0),
    st.floats(0.0, 1.0), st.floats(0.0, 1.0),
    st.integers(1, 16),
)
@settings(max_examples=40, deadline=None)
def test_monotone_in_budgets(alpha, beta, eps0, eps1, n):
    ge = GEParams(alpha, beta, eps0, eps1)
    rand_vals = [p_rand(ge, n, a) for a in range(n + 1)]
    assert all(x >= y - 1e-12 for x, y in zip(rand_vals, rand_vals[1:]))
    burst_vals = [p_burst(ge, n, b) for b in range(n + 1)]
    assert all(x >= y - 1e-12 for x, y in zip(burst_vals, burst_vals[1:]))


@given(
    st.floats(1e-4, 1.0), st.floats(1e-4, 1.0),
    st.floats(0.0, 1.0), st.floats(0.0, 1.0),
    st.integers(2, 14),
)
@settings(max_examples=40, deadline=None)
def test_combined_below_each_decoder(alpha, beta, eps0, eps1, n):
    ge = GEParams(alpha, beta, eps0, eps1)
    a = max(1, n // 4)
    b = max(a, n // 2)
    combined = p_rand_burst(ge, n, a, b)
    assert combined <= p_rand(ge, n, a) + 1e-12
    assert combined <= p_burst(ge, n, b) + 1e-12


def test_longer_blocks_fail_more():
    ge = GEParams(1e-4, 0.5, 0.05, 1.0)
    vals = [p_rand_burst(ge, n, 2, 4) for n in range(5, 15)]
    assert all(x <= y + 1e-13 for x, y in zip(vals, vals[1:]))
