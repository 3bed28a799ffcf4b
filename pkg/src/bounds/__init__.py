"""
Fano/Kovalevskij bounds relating Bayes error and mutual information.
"""

from src.bounds.information import (
    binary_entropy,
    bound_region,
    check_consistency,
    fano_lower,
    kovalevskij_upper,
    merged_bounds_table,
    write_bound_region_csv,
)
from src.bounds.models import BoundRegion, ConsistencyResult, ConsistencyStatus, MergedBoundRow

__all__ = [
    "binary_entropy",
    "bound_region",
    "check_consistency",
    "fano_lower",
    "kovalevskij_upper",
    "merged_bounds_table",
    "write_bound_region_csv",
    "BoundRegion",
    "ConsistencyResult",
    "ConsistencyStatus",
    "MergedBoundRow",
]
