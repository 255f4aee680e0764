"""Averaging operators, variation norms and Gowers norms."""

from .averages import (
    average_family,
    bilinear_average,
    dual_star,
    dual_star_star,
    holder_constant,
    linear_smoothing_average,
    maximal_average,
    upper_half_average,
)
from .gowers import differencing, gowers_norm, gowers_norm_direct, u2_witness
from .variation import (
    IndexedSequence,
    VariationResult,
    jump_count,
    jump_inequality_slack,
    variation_norm,
)

__all__ = [
    "bilinear_average",
    "upper_half_average",
    "linear_smoothing_average",
    "dual_star",
    "dual_star_star",
    "average_family",
    "maximal_average",
    "holder_constant",
    "IndexedSequence",
    "VariationResult",
    "variation_norm",
    "jump_count",
    "jump_inequality_slack",
    "differencing",
    "gowers_norm",
    "gowers_norm_direct",
    "u2_witness",
]
