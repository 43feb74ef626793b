"""Farthest points over ball intersections and a subset-sum decision procedure."""

from ._core import (
    brute_force_subset_sum,
    classify_case,
    corner_exactness,
    decide_subset_sum,
    farthest_point,
    hat_R,
    sample_farthest,
    scaled_polytope_equivalence,
)

__all__ = [
    "brute_force_subset_sum",
    "classify_case",
    "corner_exactness",
    "decide_subset_sum",
    "farthest_point",
    "hat_R",
    "sample_farthest",
    "scaled_polytope_equivalence",
]
