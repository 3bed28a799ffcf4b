"""
Unit tests for trace sanitization and dataset assembly.
"""

import numpy as np
import pytest

from src.traces.models import Trace
from src.traces.sanitizer import (
    RejectionReason,
    SanitizeRejection,
    build_dataset,
    sanitize,
    sanitize_all,
)
from src.utils.errors import DatasetError


@pytest.mark.unit
class TestSanitize:
    """Tests for sanitize function."""

    def test_sorts_and_rebases(self):
        """Test that [-1@0.2, +1@0.0] becomes [+1@0.0, -1@0.2]."""
        # Arrange
        trace = Trace.from_arrays([0.2, 0.0], [-1, 1])

        # Act
        result = sanitize(trace)

        # Assert
        assert isinstance(result, Trace)
        assert result.times.tolist() == [0.0, 0.2]
        assert result.directions.tolist() == [1, -1]

    def test_rebases_to_zero(self):
        result = sanitize(Trace.from_arrays([1.5, 1.75, 2.0], [1, -1, 1]))

        assert result.times.tolist() == [0.0, 0.25, 0.5]

    def test_stable_for_ties(self):
        """Test that equal timestamps keep record order."""
        trace = Trace.from_arrays([0.0, 0.05, 0.05, 0.05], [1, -1, 1, -1], is_dummy=[0, 0, 1, 0])

        result = sanitize(trace)

        assert result.directions.tolist() == [1, -1, 1, -1]
        assert result.is_dummy.tolist() == [False, False, True, False]

    def test_incoming_first_rejected(self):
        """Test that a trace starting with an incoming packet is rejected."""
        result = sanitize(Trace.from_arrays([0.0, 0.1], [-1, 1], label=3))

        assert isinstance(result, SanitizeRejection)
        assert result.reason is RejectionReason.INCOMING_FIRST
        assert result.label == 3

    def test_empty_rejected(self):
        result = sanitize(Trace.from_arrays([], []))

        assert isinstance(result, SanitizeRejection)
        assert result.reason is RejectionReason.EMPTY_TRACE

    def test_idempotent(self, random_traces):
        """Test sanitize(sanitize(t)) == sanitize(t) for accepted traces."""
        rng = np.random.default_rng(5)
        for trace in random_traces:
            shuffled = rng.permutation(len(trace))
            messy = Trace.from_arrays(trace.times[shuffled] + 3.0, trace.directions[shuffled], trace.label)
            once = sanitize(messy)
            if isinstance(once, SanitizeRejection):
                continue
            assert sanitize(once) == once

    def test_directional_start_is_outgoing(self, random_traces):
        for trace in random_traces:
            result = sanitize(trace)
            assert result.directions[0] == 1


@pytest.mark.unit
class TestSanitizeAll:
    """Tests for batch sanitization."""

    def test_counts_rejections(self):
        # Arrange
        traces = [
            Trace.from_arrays([0.0], [1]),
            Trace.from_arrays([0.0], [-1]),
            Trace.from_arrays([], []),
            Trace.from_arrays([0.0, 0.1], [-1, 1]),
        ]

        # Act
        summary = sanitize_all(traces)

        # Assert
        assert len(summary.accepted) == 1
        assert summary.rejected[RejectionReason.INCOMING_FIRST] == 2
        assert summary.rejected[RejectionReason.EMPTY_TRACE] == 1
        assert summary.num_rejected == 3


@pytest.mark.unit
class TestBuildDataset:
    """Tests for build_dataset function."""

    def test_builds_dataset(self, random_traces):
        dataset, summary = build_dataset(random_traces, ["a", "b", "c"], trace_length=20)

        assert len(dataset) == 30
        assert dataset.num_classes == 3
        assert dataset.trace_length == 20
        assert summary.num_rejected == 0
        assert dataset.class_counts().tolist() == [10, 10, 10]

    def test_rejects_everything(self):
        with pytest.raises(DatasetError, match="No usable traces"):
            build_dataset([Trace.from_arrays([0.0], [-1])], ["a"])

    def test_class_with_single_trace(self):
        """Test that a class with fewer than 2 usable traces is an error naming it."""
        traces = [
            Trace.from_arrays([0.0], [1], label=0),
            Trace.from_arrays([0.0], [1], label=0),
            Trace.from_arrays([0.0], [1], label=1),
            Trace.from_arrays([0.0], [-1], label=1),
        ]

        with pytest.raises(DatasetError, match="'site-b'"):
            build_dataset(traces, ["site-a", "site-b"])
