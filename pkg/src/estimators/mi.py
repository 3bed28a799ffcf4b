"""
Mutual information between a discrete label and continuous features.

Ross' nearest-neighbor estimator, reported in bits:

    I = psi(N) - <psi(N_y)> + <psi(k_i)> - <psi(m_i)>

where for sample i of class y, d_i is the distance to its k_i-th nearest
same-class neighbor (k_i = min(k, N_y - 1)) and m_i counts all other
samples at distance <= d_i. Averages run over samples.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from src.embedding.models import FeatureMatrix, FeatureProvenance
from src.estimators.digamma import digamma
from src.estimators.knn import KnnIndex
from src.estimators.models import KnnBackend, MiComponent, MiEstimate, RepresentationMi
from src.features.manual import Standardizer
from src.utils.errors import EstimatorError

logger = logging.getLogger(__name__)

NATS_TO_BITS = math.log2(math.e)


def ross_mi(
    features: np.ndarray,
    labels: np.ndarray,
    k: int = 5,
    num_classes: Optional[int] = None,
    backend: KnnBackend = KnnBackend.AUTO
) -> MiComponent:
    """
    Estimate I(label; features) with the Ross estimator.

    Args:
        features: (N, d) feature rows
        labels: (N,) class labels
        k: Neighbor count (reduced per sample for classes with <= k samples)
        num_classes: C used for the log2 C clamp (defaults to classes present)
        backend: kNN search backend

    Returns:
        MiComponent in bits, clamped to [0, log2 C]

    Raises:
        EstimatorError: If a class has a single sample or k < 1

    Example:
        >>> rng = np.random.default_rng(0)
        >>> x = rng.normal(size=(500, 2)) + np.repeat(np.arange(5), 100)[:, None] * 100
        >>> round(ross_mi(x, np.repeat(np.arange(5), 100)).value_bits, 3)
        2.322
    """
    if k < 1:
        raise EstimatorError(f"k must be at least 1, got {k}")

    points = np.asarray(features, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    labels = np.asarray(labels, dtype=np.int64)
    n = len(labels)

    classes, class_sizes = np.unique(labels, return_counts=True)
    if np.any(class_sizes < 2):
        raise EstimatorError(f"Class {int(classes[np.argmin(class_sizes)])} has a single sample")
    if num_classes is None:
        num_classes = len(classes)

    radii = np.empty(n)
    k_used = np.empty(n, dtype=np.int64)
    sizes = np.empty(n, dtype=np.int64)

    for cls, size in zip(classes, class_sizes):
        members = np.flatnonzero(labels == cls)
        k_class = min(k, int(size) - 1)
        index = KnnIndex(points[members], backend=backend)
        distances, _ = index.kneighbors(points[members], k_class, exclude=np.arange(len(members)))
        radii[members] = distances[:, k_class - 1]
        k_used[members] = k_class
        sizes[members] = size

    everyone = KnnIndex(points, backend=backend)
    counts = everyone.count_within(points, radii, exclude=np.arange(n))

    nats = (
        digamma(float(n))
        - float(np.mean(digamma(sizes.astype(np.float64))))
        + float(np.mean(digamma(k_used.astype(np.float64))))
        - float(np.mean(digamma(counts.astype(np.float64))))
    )
    raw_bits = nats * NATS_TO_BITS
    upper = math.log2(num_classes) if num_classes > 1 else 0.0
    value = min(max(raw_bits, 0.0), upper)

    return MiComponent(
        value_bits=value,
        raw_bits=raw_bits,
        clamped=value != raw_bits,
        k=k,
        reduced_k_samples=int(np.count_nonzero(k_used < k)),
        num_samples=n,
        num_classes=num_classes,
    )


def _half_features(features: FeatureMatrix, rows: np.ndarray) -> np.ndarray:
    values = features.values[rows]
    if features.provenance is FeatureProvenance.MANUAL:
        return Standardizer.fit(values).transform(values)
    return values


def estimate_mi(
    features_per_rep: Sequence[FeatureMatrix],
    eval_split: Tuple[np.ndarray, np.ndarray],
    num_classes: int,
    k: int = 5,
    backend: KnnBackend = KnnBackend.AUTO
) -> MiEstimate:
    """
    Estimate the MI as the maximum over representations.

    Each representation is evaluated on E1 and E2 separately and the two
    values are averaged.

    Args:
        features_per_rep: Feature matrices covering E1 and E2
        eval_split: (E1 rows, E2 rows)
        num_classes: Number of classes C
        k: Neighbor count
        backend: kNN search backend

    Returns:
        MiEstimate with per-representation breakdown

    Raises:
        EstimatorError: From ross_mi, or if no representation is given
    """
    if not features_per_rep:
        raise EstimatorError("At least one representation is required")

    breakdown = []
    for features in features_per_rep:
        halves = []
        for rows in eval_split:
            rows = np.asarray(rows, dtype=np.int64)
            halves.append(ross_mi(_half_features(features, rows), features.labels[rows], k, num_classes, backend))

        result = RepresentationMi(
            tag=features.provenance.value,
            mi_bits=(halves[0].value_bits + halves[1].value_bits) / 2.0,
            mi_first=halves[0].value_bits,
            mi_second=halves[1].value_bits,
            clamped=halves[0].clamped or halves[1].clamped,
            k=k,
        )
        logger.debug(f"MI {result.tag}: {result.mi_bits:.4f} bits")
        breakdown.append(result)

    return MiEstimate(num_classes=num_classes, breakdown=breakdown)
