"""
Unit tests for nearest-neighbor search and the digamma function.
"""

import numpy as np
import pytest
from scipy.special import psi

from src.estimators.digamma import digamma
from src.estimators.knn import KnnIndex, knn_error, majority_vote, resolve_backend
from src.estimators.models import KnnBackend


@pytest.mark.unit
class TestKnnIndex:
    """Tests for KnnIndex."""

    def test_ties_broken_by_lowest_index(self):
        """Test that reference rows 0 and 1 at equal distance come back as [0, 1]."""
        index = KnnIndex(np.array([[0.0], [2.0], [5.0]]), backend=KnnBackend.BRUTE_FORCE)

        distances, indices = index.kneighbors(np.array([[1.0]]), k=2)

        assert indices.tolist() == [[0, 1]]
        assert distances.tolist() == [[1.0, 1.0]]

    @pytest.mark.parametrize("dim", [1, 3, 8])
    def test_backends_agree(self, dim):
        """Test brute-force and tree searches return identical neighbors."""
        # Arrange
        rng = np.random.default_rng(dim)
        points = rng.integers(0, 4, size=(150, dim)).astype(float)
        queries = rng.integers(0, 4, size=(40, dim)).astype(float)
        brute = KnnIndex(points, backend=KnnBackend.BRUTE_FORCE)
        tree = KnnIndex(points, backend=KnnBackend.SPATIAL_TREE)

        # Act
        brute_result = brute.kneighbors(queries, k=5)
        tree_result = tree.kneighbors(queries, k=5)

        # Assert
        assert np.array_equal(brute_result[1], tree_result[1])
        assert np.allclose(brute_result[0], tree_result[0])

    def test_backends_agree_on_counts(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(200, 2))
        radii = np.full(200, 0.3)

        brute = KnnIndex(points, backend=KnnBackend.BRUTE_FORCE).count_within(points, radii, np.arange(200))
        tree = KnnIndex(points, backend=KnnBackend.SPATIAL_TREE).count_within(points, radii, np.arange(200))

        assert brute.tolist() == tree.tolist()

    def test_leave_one_out(self):
        points = np.array([[0.0], [1.0], [3.0]])
        index = KnnIndex(points)

        _, indices = index.kneighbors(points, k=1, exclude=np.arange(3))

        assert indices[:, 0].tolist() == [1, 0, 1]

    def test_count_includes_boundary(self):
        index = KnnIndex(np.array([[0.0], [1.0], [2.0]]))

        counts = index.count_within(np.array([[0.0]]), np.array([1.0]))

        assert counts.tolist() == [2]

    def test_k_too_large(self):
        index = KnnIndex(np.zeros((3, 2)))

        with pytest.raises(ValueError, match="outside"):
            index.kneighbors(np.zeros((1, 2)), k=3, exclude=np.array([0]))

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            KnnIndex(np.zeros((0, 2)))

    def test_auto_backend(self):
        assert resolve_backend(KnnBackend.AUTO, 4) is KnnBackend.SPATIAL_TREE
        assert resolve_backend(KnnBackend.AUTO, 64) is KnnBackend.BRUTE_FORCE


@pytest.mark.unit
class TestKnnError:
    """Tests for knn_error and majority_vote."""

    def test_docstring_example(self):
        error = knn_error(
            np.array([[0.0], [1.0]]), np.array([0, 1]),
            np.array([[0.4], [0.6]]), np.array([0, 0]),
        )

        assert error == 0.5

    def test_majority_tie_goes_to_lowest_label(self):
        assert majority_vote(np.array([[2, 1], [1, 1]]), 3).tolist() == [1, 1]

    def test_separated_clusters(self):
        rng = np.random.default_rng(1)
        labels = np.repeat([0, 1], 50)
        train = rng.normal(size=(100, 2)) + labels[:, None] * 20
        test = rng.normal(size=(100, 2)) + labels[:, None] * 20

        assert knn_error(train, labels, test, labels) == 0.0

    def test_errors(self):
        with pytest.raises(ValueError, match="empty"):
            knn_error(np.zeros((2, 1)), np.array([0, 1]), np.zeros((0, 1)), np.array([]))
        with pytest.raises(ValueError, match="exceeds"):
            knn_error(np.zeros((2, 1)), np.array([0, 1]), np.zeros((1, 1)), np.array([0]), k=3)
        with pytest.raises(ValueError, match="dimension"):
            knn_error(np.zeros((2, 1)), np.array([0, 1]), np.zeros((1, 2)), np.array([0]))


@pytest.mark.unit
class TestDigamma:
    """Tests for digamma function."""

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 3.7, 9.999, 10.0, 100.0, 123.4, 1000.0, 1e6])
    def test_matches_reference(self, x):
        assert digamma(x) == pytest.approx(float(psi(x)), abs=1e-10)

    def test_euler_mascheroni(self):
        assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-12)

    def test_recurrence(self):
        """Test psi(x + 1) = psi(x) + 1/x to 1e-12 on 10^4 random x."""
        x = np.random.default_rng(11).uniform(0.05, 200.0, size=10_000)

        gap = np.abs(digamma(x + 1.0) - digamma(x) - 1.0 / x)

        assert gap.max() <= 1e-12

    def test_array_shape_preserved(self):
        values = digamma(np.array([[1.0, 2.0], [3.0, 4.0]]))

        assert values.shape == (2, 2)
        assert isinstance(digamma(2.0), float)

    @pytest.mark.parametrize("x", [0.0, -1.0, float("inf"), float("nan")])
    def test_invalid_input(self, x):
        with pytest.raises(ValueError):
            digamma(x)
