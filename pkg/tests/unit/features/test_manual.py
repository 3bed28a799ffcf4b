"""
Unit tests for burst segmentation and manual features.
"""

import csv

import numpy as np
import pytest

from src.features.bursts import burst_segments
from src.features.manual import (
    MANUAL_FEATURE_DIM,
    MANUAL_FEATURE_NAMES,
    Standardizer,
    export_manual_features_csv,
    manual_feature_matrix,
    manual_features,
)
from src.traces.models import Direction, Trace


def _feature(vector: np.ndarray, name: str) -> float:
    return float(vector[MANUAL_FEATURE_NAMES.index(name)])


@pytest.mark.unit
class TestBurstSegments:
    """Tests for burst_segments function."""

    def test_mixed_directions(self):
        """Test dirs [+1,+1,-1,+1] -> (out,0,2), (in,2,1), (out,3,1)."""
        trace = Trace.from_arrays([0.0, 0.1, 0.2, 0.3], [1, 1, -1, 1])

        bursts = burst_segments(trace)

        assert [(b.direction, b.start, b.length) for b in bursts] == [
            (Direction.OUTGOING, 0, 2),
            (Direction.INCOMING, 2, 1),
            (Direction.OUTGOING, 3, 1),
        ]

    def test_single_direction(self):
        trace = Trace.from_arrays(np.arange(9) * 0.1, [1] * 9)

        bursts = burst_segments(trace)

        assert len(bursts) == 1
        assert bursts[0].length == 9
        assert bursts[0].duration == pytest.approx(0.8)

    def test_alternating(self):
        trace = Trace.from_arrays(np.arange(6) * 0.1, [1, -1, 1, -1, 1, -1])

        bursts = burst_segments(trace)

        assert [b.length for b in bursts] == [1] * 6

    def test_lengths_sum_to_trace_length(self, random_traces):
        for trace in random_traces:
            assert sum(b.length for b in burst_segments(trace)) == len(trace)


@pytest.mark.unit
class TestManualFeatures:
    """Tests for manual_features function."""

    def test_dimension(self):
        assert MANUAL_FEATURE_DIM == 31
        assert len(set(MANUAL_FEATURE_NAMES)) == 31

    def test_counts(self, simple_trace):
        """Test [out@0, in@0.1, out@0.3] counts, duration and burst count."""
        features = manual_features(simple_trace)

        assert features[:5].tolist() == pytest.approx([3.0, 2.0, 1.0, 2.0 / 3.0, 0.3])
        assert _feature(features, "burst_count_out") + _feature(features, "burst_count_in") == 3

    def test_median_inter_packet_time(self, simple_trace):
        """Test that gaps [0.1, 0.2] have median 0.15."""
        features = manual_features(simple_trace)

        assert _feature(features, "ipt_all_p50") == pytest.approx(0.15)

    def test_single_packet_trace(self):
        """Test that a one-packet trace has only its count set."""
        features = manual_features(Trace.from_arrays([0.0], [1]))

        assert features[0] == 1.0
        assert features[1] == 1.0
        assert features[3] == 1.0
        assert np.all(features[5:] == 0.0)

    def test_burst_statistics(self, burst_trace):
        """Test burst sizes 2 (out), 3 (in), 1 (out)."""
        features = manual_features(burst_trace)

        assert _feature(features, "burst_count_out") == 2
        assert _feature(features, "burst_count_in") == 1
        assert _feature(features, "burst_mean_size_out") == pytest.approx(1.5)
        assert _feature(features, "burst_max_size_in") == 3
        assert _feature(features, "burst_mean_duration_in") == pytest.approx(0.3)

    def test_no_incoming_packets(self):
        """Test that statistics of an empty direction default to 0."""
        features = manual_features(Trace.from_arrays([0.0, 0.1, 0.2], [1, 1, 1]))

        assert _feature(features, "incoming_packets") == 0
        assert _feature(features, "ipt_in_mean") == 0.0
        assert _feature(features, "burst_count_in") == 0
        assert np.all(np.isfinite(features))

    def test_tie_permutation_invariance(self):
        """Test that swapping equal-time packets keeps counts and duration."""
        a = Trace.from_arrays([0.0, 0.1, 0.1, 0.4], [1, 1, -1, -1])
        b = Trace.from_arrays([0.0, 0.1, 0.1, 0.4], [1, -1, 1, -1])

        fa, fb = manual_features(a), manual_features(b)

        assert fa[:5].tolist() == fb[:5].tolist()

    def test_counts_add_up(self, random_traces):
        matrix = manual_feature_matrix(random_traces)

        assert matrix.shape == (len(random_traces), MANUAL_FEATURE_DIM)
        assert np.array_equal(matrix[:, 1] + matrix[:, 2], matrix[:, 0])
        assert np.all((matrix[:, 3] >= 0) & (matrix[:, 3] <= 1))
        assert np.all(np.isfinite(matrix))

    def test_empty_matrix(self):
        assert manual_feature_matrix([]).shape == (0, MANUAL_FEATURE_DIM)


@pytest.mark.unit
class TestStandardizer:
    """Tests for per-split z-scoring."""

    def test_zero_mean_unit_variance(self):
        rng = np.random.default_rng(0)
        matrix = rng.normal(5.0, 3.0, size=(100, 4))

        scaled = Standardizer.fit(matrix).transform(matrix)

        assert np.allclose(scaled.mean(axis=0), 0.0)
        assert np.allclose(scaled.std(axis=0), 1.0)

    def test_constant_column(self):
        matrix = np.array([[1.0, 2.0], [1.0, 4.0]])

        scaled = Standardizer.fit(matrix).transform(matrix)

        assert scaled[:, 0].tolist() == [0.0, 0.0]


@pytest.mark.unit
def test_export_manual_features_csv(tmp_path, random_traces):
    """Test the CSV header and one row per trace with the label last."""
    path = export_manual_features_csv(random_traces, tmp_path / "features.csv")

    with open(path, newline="") as f:
        rows = list(csv.reader(f))

    assert rows[0] == MANUAL_FEATURE_NAMES + ["label"]
    assert len(rows) == len(random_traces) + 1
    assert [int(r[-1]) for r in rows[1:]] == [t.label for t in random_traces]
