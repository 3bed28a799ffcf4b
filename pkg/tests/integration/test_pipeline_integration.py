"""
End-to-end tests of the estimation pipeline on synthetic template traces.

Template traces have closed-form BER and MI, so every run here checks the
full load -> defend -> split -> embed -> estimate path against a known
answer rather than against a previous output.
"""

import math

import numpy as np
import pytest

from src.defenses.merge import merged_theoretical_error
from src.estimators.ber import cover_hart_lower
from src.pipeline.report import report_paths
from src.pipeline.runner import run_estimation
from tests.conftest import make_run_config
from tests.integration.conftest import make_template_config


def _mean_knn_error(report) -> float:
    return float(np.mean([
        r.knn_error for fold in report.successful_folds for r in fold.representations
    ]))


@pytest.mark.integration
@pytest.mark.slow
class TestTemplateTraceOracles:
    """Aggregates against the noiseless and fully random extremes."""

    def test_noiseless_templates(self):
        """
        Test BER <= 0.01 and MI >= 0.97 log2 C without flips.

        Noiseless templates embed to exact duplicates, so the Ross estimate
        saturates once each evaluation half holds k + 1 samples per class:
        24 per class over 2 folds gives 6 per class and half.
        """
        # Arrange
        num_classes = 5
        cfg = make_template_config(num_classes, samples_per_class=24, flip_prob=0.0)

        # Act
        report = run_estimation(cfg)

        # Assert
        assert len(report.successful_folds) == 2
        assert report.aggregate_ber.mean <= 0.01
        assert report.aggregate_mi.mean >= 0.97 * math.log2(num_classes)
        assert report.consistency.status.value == "consistent"

    def test_fully_random_templates(self):
        """Test MI <= 0.05 log2 C and chance-level kNN error at flip_prob = 0.5."""
        num_classes = 4
        cfg = make_template_config(num_classes, samples_per_class=150, flip_prob=0.5)

        report = run_estimation(cfg)

        assert report.aggregate_mi.mean <= 0.05 * math.log2(num_classes)
        assert _mean_knn_error(report) >= 0.9 * (num_classes - 1) / num_classes
        assert report.aggregate_ber.mean <= (num_classes - 1) / num_classes

    def test_ber_lower_bound_below_classifier_error(self):
        cfg = make_template_config(4, samples_per_class=60, flip_prob=0.1)

        report = run_estimation(cfg)

        assert report.baseline_error is not None
        assert report.aggregate_ber.mean <= report.baseline_error.mean + 0.01


@pytest.mark.integration
@pytest.mark.slow
def test_merge_sweep_tracks_one_minus_one_over_m():
    """
    Test the merged-trace defense against 1 - 1/M at C=20, 200 traces per class.

    Merged noiseless templates reveal the set of merged classes but not
    which of them is real, so the 1-NN error sits in
    [1 - 1/M - 0.10, 1 - 1/M + 0.05]. The reported BER is the Cover-Hart
    bound of that error, so its window is the same one mapped through
    cover_hart_lower on the low side.
    """
    # Arrange
    num_classes, trace_len = 20, 12
    sweep = [1, 2, 4, 8]
    bounds, errors = [], []

    # Act
    for m in sweep:
        cfg = make_template_config(
            num_classes,
            samples_per_class=200,
            flip_prob=0.0,
            trace_len=trace_len,
            trace_length=trace_len * max(sweep),
            defense={"variant": "merge", "m": m, "seed": 7},
        )
        report = run_estimation(cfg)
        bounds.append(report.aggregate_ber.mean)
        errors.append(_mean_knn_error(report))

    # Assert
    for earlier, later in zip(bounds, bounds[1:]):
        assert later >= earlier
    for m, bound, error in zip(sweep, bounds, errors):
        expected = merged_theoretical_error(m)
        assert expected - 0.10 <= error <= expected + 0.05
        low = cover_hart_lower(max(expected - 0.10, 0.0), num_classes)
        assert low <= bound <= expected + 0.05


@pytest.mark.integration
def test_identical_runs_write_identical_csv(tmp_path):
    """Test that two runs with the same config and seed give byte-identical CSVs."""
    # Arrange
    first = make_run_config(output=str(tmp_path / "a" / "report.json"))
    second = make_run_config(output=str(tmp_path / "b" / "report.json"))

    # Act
    run_estimation(first)
    run_estimation(second)

    # Assert
    _, first_csv = report_paths(first.output)
    _, second_csv = report_paths(second.output)
    assert first_csv.read_bytes() == second_csv.read_bytes()
