"""
Bayes error rate estimation from 1-NN errors.

For each representation the 1-NN classifier is trained on E1 and tested on
E2 and vice versa; the mean error R is mapped to a lower bound of the Bayes
error with the Cover-Hart inequality

    R* >= R / (1 + sqrt(1 - C R / (C - 1)))

and the reported estimate is the minimum over representations.
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from src.embedding.models import FeatureMatrix, FeatureProvenance
from src.estimators.knn import knn_error
from src.estimators.models import BerEstimate, KnnBackend, RepresentationBer
from src.features.manual import Standardizer
from src.utils.errors import EstimatorError
from src.utils.validation import validate_num_classes

logger = logging.getLogger(__name__)


def cover_hart_lower(error_rate: float, num_classes: int) -> float:
    """
    Cover-Hart lower bound of the Bayes error given a 1-NN error.

    The square-root argument is clamped at 0 when the error exceeds
    (C-1)/C.

    Args:
        error_rate: 1-NN error R in [0, 1]
        num_classes: Number of classes C >= 2

    Returns:
        Lower bound, never larger than R

    Raises:
        ValueError: If R is outside [0, 1] or C < 2

    Example:
        >>> round(cover_hart_lower(0.4, 2), 5)
        0.27639
    """
    ok, message = validate_num_classes(num_classes)
    if not ok:
        raise ValueError(message)
    if not 0.0 <= error_rate <= 1.0:
        raise ValueError(f"Error rate must be in [0, 1], got {error_rate}")

    radicand = max(0.0, 1.0 - num_classes * error_rate / (num_classes - 1))
    return error_rate / (1.0 + math.sqrt(radicand))


def check_halves(labels: np.ndarray, first: np.ndarray, second: np.ndarray) -> None:
    """
    Require every class of the evaluation set to appear in both halves.

    Raises:
        EstimatorError: Naming the first missing class
    """
    classes = np.unique(labels[np.concatenate([first, second])])
    for name, half in (("E1", first), ("E2", second)):
        missing = np.setdiff1d(classes, labels[half])
        if len(missing):
            raise EstimatorError(f"Class {int(missing[0])} is missing from evaluation half {name}")


def prepare_pair(
    features: FeatureMatrix,
    fit_rows: np.ndarray,
    apply_rows: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return (fit, apply) feature rows; manual features are z-scored with
    statistics of the fit rows.
    """
    fit = features.values[fit_rows]
    other = features.values[apply_rows]
    if features.provenance is FeatureProvenance.MANUAL:
        standardizer = Standardizer.fit(fit)
        return standardizer.transform(fit), standardizer.transform(other)
    return fit, other


def representation_ber(
    features: FeatureMatrix,
    first: np.ndarray,
    second: np.ndarray,
    num_classes: int,
    backend: KnnBackend = KnnBackend.AUTO
) -> RepresentationBer:
    """BER estimate of a single representation on (E1, E2)."""
    labels = features.labels

    train, test = prepare_pair(features, first, second)
    forward = knn_error(train, labels[first], test, labels[second], k=1, backend=backend)
    train, test = prepare_pair(features, second, first)
    backward = knn_error(train, labels[second], test, labels[first], k=1, backend=backend)

    error = (forward + backward) / 2.0
    bound = min(cover_hart_lower(error, num_classes), (num_classes - 1) / num_classes)

    return RepresentationBer(
        tag=features.provenance.value,
        knn_error=error,
        knn_error_forward=forward,
        knn_error_backward=backward,
        lower_bound=bound,
    )


def estimate_ber(
    features_per_rep: Sequence[FeatureMatrix],
    eval_split: Tuple[np.ndarray, np.ndarray],
    num_classes: int,
    backend: KnnBackend = KnnBackend.AUTO
) -> BerEstimate:
    """
    Estimate the BER as the minimum bound over representations.

    Args:
        features_per_rep: Feature matrices covering E1 and E2 (row indices
                          refer to these matrices)
        eval_split: (E1 rows, E2 rows)
        num_classes: Number of classes C
        backend: kNN search backend

    Returns:
        BerEstimate with per-representation breakdown

    Raises:
        EstimatorError: If no representation is given or a class misses a half
    """
    if not features_per_rep:
        raise EstimatorError("At least one representation is required")

    first, second = (np.asarray(rows, dtype=np.int64) for rows in eval_split)
    breakdown = []
    for features in features_per_rep:
        check_halves(features.labels, first, second)
        result = representation_ber(features, first, second, num_classes, backend)
        logger.debug(f"BER {result.tag}: knn_error={result.knn_error:.4f} bound={result.lower_bound:.4f}")
        breakdown.append(result)

    return BerEstimate(num_classes=num_classes, breakdown=breakdown)
