"""
Integration Test Fixtures

Provides end-to-end run configurations on synthetic template traces, where
the true BER and MI are known, plus shared Gaussian samples for the
estimator convergence checks.
"""

import numpy as np
import pytest

from tests.conftest import make_run_config


def make_template_config(num_classes: int, samples_per_class: int, flip_prob: float, **overrides):
    """Template-trace run with an embedding large enough to learn the templates."""
    trace_len = overrides.pop("trace_len", 12)
    settings = dict(
        synthetic={
            "variant": "template_traces",
            "num_classes": num_classes,
            "samples_per_class": samples_per_class,
            "trace_len": trace_len,
            "flip_prob": flip_prob,
            "seed": 11,
        },
        embedding={
            "conv_blocks": [{"channels": 8, "kernel": 3, "stride": 1}],
            "feature_dim": 16,
            "batch_size": 16,
            "epochs": 10,
            "learning_rate": 0.05,
        },
        trace_length=trace_len,
        num_folds=2,
        seed=5,
    )
    settings.update(overrides)
    return make_run_config(**settings)


@pytest.fixture(scope="session")
def gaussian_pair_samples():
    """10,000 draws from N(-1, 1) and N(1, 1) with equal priors."""
    rng = np.random.default_rng(2024)
    labels = rng.integers(0, 2, size=10000)
    points = rng.normal(np.where(labels == 0, -1.0, 1.0), 1.0)
    return points[:, None], labels
