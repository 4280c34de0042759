"""Exact block-erasure probabilities and ordered bounds for delay-constrained
streaming codes over the Gilbert-Elliott packet-erasure channel."""

from .blockcodes import p_burst, p_rand, p_rand_burst, p_weight_and_span
from .channel import (
    GEParams,
    pattern_probability,
    sample_block,
    sample_blocks,
    span,
    stationary_vector,
    transfer_matrices,
    transition_matrix,
    transition_matrix_power,
    weight,
)
from .counts import (
    FREE,
    Segment,
    count_series_coeff,
    erasure_count_pmf,
    erasure_count_probs,
    state_count_probs,
    weight_transfer_table,
    window_product,
)
from .errors import ConsistencyError, GebepError, ParameterError
from .selection import SelectionResult, SweepRow, optimal_rate, select_best, sweep
from .streaming import (
    BoundsReport,
    EscParams,
    admissible_mask,
    bep_lower,
    bep_upper,
    build_bounds_report,
    exact_bep,
    is_admissible,
    lower_set_tag,
    lower_set_tags,
    pep_union_bound,
    simple_bounds,
    upper_set_tag,
    upper_set_tags,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "ConsistencyError",
    "EscParams",
    "FREE",
    "GEParams",
    "GebepError",
    "ParameterError",
    "Segment",
    "SelectionResult",
    "SweepRow",
    "admissible_mask",
    "bep_lower",
    "bep_upper",
    "build_bounds_report",
    "count_series_coeff",
    "erasure_count_pmf",
    "erasure_count_probs",
    "exact_bep",
    "is_admissible",
    "lower_set_tag",
    "lower_set_tags",
    "optimal_rate",
    "p_burst",
    "p_rand",
    "p_rand_burst",
    "p_weight_and_span",
    "pattern_probability",
    "pep_union_bound",
    "sample_block",
    "sample_blocks",
    "select_best",
    "simple_bounds",
    "span",
    "state_count_probs",
    "stationary_vector",
    "sweep",
    "transfer_matrices",
    "transition_matrix",
    "transition_matrix_power",
    "upper_set_tag",
    "upper_set_tags",
    "weight",
    "weight_transfer_table",
    "window_product",
]
