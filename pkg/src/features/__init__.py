"""
Manual (non-learned) trace features.
"""

from src.features.bursts import Burst, burst_segments
from src.features.manual import (
    MANUAL_FEATURE_DIM,
    MANUAL_FEATURE_NAMES,
    Standardizer,
    export_manual_features_csv,
    manual_feature_matrix,
    manual_features,
)

__all__ = [
    "Burst",
    "burst_segments",
    "MANUAL_FEATURE_DIM",
    "MANUAL_FEATURE_NAMES",
    "Standardizer",
    "export_manual_features_csv",
    "manual_feature_matrix",
    "manual_features",
]
