"""
kNN-based estimators of the Bayes error rate and of mutual information.
"""

from src.estimators.ber import cover_hart_lower, estimate_ber
from src.estimators.digamma import digamma
from src.estimators.knn import KnnIndex, knn_error
from src.estimators.mi import estimate_mi, ross_mi
from src.estimators.models import (
    BerEstimate,
    EstimatorSettings,
    KnnBackend,
    MiComponent,
    MiEstimate,
)

__all__ = [
    "cover_hart_lower",
    "estimate_ber",
    "digamma",
    "KnnIndex",
    "knn_error",
    "estimate_mi",
    "ross_mi",
    "BerEstimate",
    "EstimatorSettings",
    "KnnBackend",
    "MiComponent",
    "MiEstimate",
]
