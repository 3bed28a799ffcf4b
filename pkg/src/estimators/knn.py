"""
Exact Euclidean nearest-neighbor search with deterministic tie-breaking.

Two backends share one distance routine. BruteForce scans every reference
row; SpatialTree uses scipy's cKDTree only to collect candidates inside a
slightly enlarged radius, then ranks them with the shared routine. Both
therefore return identical neighbor sets, with distance ties broken by the
lowest reference index, and identical radius counts.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.estimators.models import KnnBackend

logger = logging.getLogger(__name__)

# Candidate radii are widened so tree round-off never drops a boundary point
_RADIUS_RELATIVE_SLACK = 1e-9
_RADIUS_ABSOLUTE_SLACK = 1e-12

# Dimensions above which the tree rarely beats a scan
TREE_MAX_DIM = 16


def _euclidean(rows: np.ndarray, query: np.ndarray) -> np.ndarray:
    return np.sqrt(((rows - query) ** 2).sum(axis=1))


def _widen(radius: float) -> float:
    return radius * (1.0 + _RADIUS_RELATIVE_SLACK) + _RADIUS_ABSOLUTE_SLACK


def _select(distances: np.ndarray, indices: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((indices, distances))[:k]
    return distances[order], indices[order]


def resolve_backend(backend: KnnBackend, dim: int) -> KnnBackend:
    """Pick a concrete backend for AUTO."""
    backend = KnnBackend(backend)
    if backend is KnnBackend.AUTO:
        return KnnBackend.SPATIAL_TREE if dim <= TREE_MAX_DIM else KnnBackend.BRUTE_FORCE
    return backend


class KnnIndex:
    """
    Immutable index over reference points.

    Attributes:
        points: (n, d) reference rows
        labels: (n,) labels of the reference rows
        backend: Concrete search backend

    Example:
        >>> index = KnnIndex(np.array([[0.0], [1.0]]), np.array([0, 1]))
        >>> index.kneighbors(np.array([[0.4]]), k=1)[1].tolist()
        [[0]]
    """

    def __init__(
        self,
        points: np.ndarray,
        labels: Optional[np.ndarray] = None,
        backend: KnnBackend = KnnBackend.AUTO
    ):
        points = np.ascontiguousarray(points, dtype=np.float64)
        if points.ndim != 2:
            raise ValueError(f"Reference points must be 2-D, got shape {points.shape}")
        if len(points) == 0:
            raise ValueError("Reference set is empty")

        self.points = points
        self.points.setflags(write=False)
        self.labels = None if labels is None else np.asarray(labels, dtype=np.int64)
        self.backend = resolve_backend(backend, points.shape[1])
        self._tree = cKDTree(points) if self.backend is KnnBackend.SPATIAL_TREE else None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    # ------------------------------------------------------------------
    # Candidate generation
    # ------------------------------------------------------------------

    def _candidates_within(self, query: np.ndarray, radius: float) -> np.ndarray:
        if self._tree is None:
            return np.arange(len(self.points))
        return np.asarray(self._tree.query_ball_point(query, _widen(radius)), dtype=np.int64)

    def _knn_radius(self, query: np.ndarray, k: int) -> float:
        k = min(k, len(self.points))
        distances, _ = self._tree.query(query, k=k)
        return float(np.max(np.atleast_1d(distances)))

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def kneighbors(
        self,
        queries: np.ndarray,
        k: int,
        exclude: Optional[np.ndarray] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Find the k nearest reference rows of every query.

        Args:
            queries: (m, d) query rows
            k: Number of neighbors
            exclude: Optional (m,) reference index to skip per query
                     (-1 for none), used for leave-one-out queries

        Returns:
            (distances, indices), both (m, k), sorted by (distance, index)

        Raises:
            ValueError: If k exceeds the available reference rows
        """
        queries = np.asarray(queries, dtype=np.float64)
        if queries.ndim != 2 or queries.shape[1] != self.dim:
            raise ValueError(f"Queries must have shape (m, {self.dim}), got {queries.shape}")
        available = len(self.points) - (1 if exclude is not None else 0)
        if k < 1 or k > available:
            raise ValueError(f"k={k} outside [1, {available}] for a reference set of {len(self.points)}")

        out_distances = np.empty((len(queries), k))
        out_indices = np.empty((len(queries), k), dtype=np.int64)

        for i, query in enumerate(queries):
            skip = -1 if exclude is None else int(exclude[i])
            if self._tree is None:
                candidates = np.arange(len(self.points))
            else:
                radius = self._knn_radius(query, k + (1 if skip >= 0 else 0))
                candidates = self._candidates_within(query, radius)
            if skip >= 0:
                candidates = candidates[candidates != skip]

            distances = _euclidean(self.points[candidates], query)
            if len(candidates) > k:
                threshold = np.partition(distances, k - 1)[k - 1]
                keep = distances <= threshold
                distances, candidates = distances[keep], candidates[keep]
            out_distances[i], out_indices[i] = _select(distances, candidates, k)

        return out_distances, out_indices

    def count_within(
        self,
        queries: np.ndarray,
        radii: np.ndarray,
        exclude: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """
        Count reference rows at distance <= radius from each query.

        Args:
            queries: (m, d) query rows
            radii: (m,) non-negative radii
            exclude: Optional (m,) reference index not counted per query

        Returns:
            (m,) integer counts
        """
        queries = np.asarray(queries, dtype=np.float64)
        radii = np.asarray(radii, dtype=np.float64)
        counts = np.empty(len(queries), dtype=np.int64)

        for i, (query, radius) in enumerate(zip(queries, radii)):
            candidates = self._candidates_within(query, radius)
            if exclude is not None and exclude[i] >= 0:
                candidates = candidates[candidates != exclude[i]]
            counts[i] = int(np.count_nonzero(_euclidean(self.points[candidates], query) <= radius))

        return counts


# ============================================================================
# Classification error
# ============================================================================


def majority_vote(neighbor_labels: np.ndarray, num_classes: int) -> np.ndarray:
    """Row-wise majority label; ties go to the lowest class index."""
    rows = np.repeat(np.arange(len(neighbor_labels)), neighbor_labels.shape[1])
    votes = np.zeros((len(neighbor_labels), num_classes), dtype=np.int64)
    np.add.at(votes, (rows, neighbor_labels.reshape(-1)), 1)
    return np.argmax(votes, axis=1)


def knn_error(
    train_points: np.ndarray,
    train_labels: np.ndarray,
    test_points: np.ndarray,
    test_labels: np.ndarray,
    k: int = 1,
    backend: KnnBackend = KnnBackend.AUTO
) -> float:
    """
    Test error of the k-nearest-neighbor classifier.

    Args:
        train_points: (n, d) reference rows
        train_labels: (n,) reference labels
        test_points: (m, d) test rows (m >= 1)
        test_labels: (m,) true test labels
        k: Neighbors per vote
        backend: Search backend

    Returns:
        Fraction of misclassified test rows

    Raises:
        ValueError: If k > n, the test set is empty or dimensions differ

    Example:
        >>> knn_error(np.array([[0.0], [1.0]]), np.array([0, 1]),
        ...           np.array([[0.4], [0.6]]), np.array([0, 0]), k=1)
        0.5
    """
    test_labels = np.asarray(test_labels, dtype=np.int64)
    train_labels = np.asarray(train_labels, dtype=np.int64)
    if len(test_labels) == 0:
        raise ValueError("Test set is empty")
    if k > len(train_labels):
        raise ValueError(f"k={k} exceeds the training set size {len(train_labels)}")
    if np.shape(train_points)[1] != np.shape(test_points)[1]:
        raise ValueError("Train and test features differ in dimension")

    index = KnnIndex(train_points, train_labels, backend)
    _, neighbors = index.kneighbors(test_points, k)
    num_classes = int(max(train_labels.max(), test_labels.max())) + 1
    predictions = majority_vote(train_labels[neighbors], num_classes)
    return float(np.mean(predictions != test_labels))
