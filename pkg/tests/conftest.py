"""
Shared Test Fixtures

Small traces and datasets used across the unit and integration suites.
"""

import numpy as np
import pytest

from src.traces.models import Dataset, Trace


@pytest.fixture
def simple_trace():
    """Sanitized three-packet trace: out@0, in@0.1, out@0.3."""
    return Trace.from_arrays([0.0, 0.1, 0.3], [1, -1, 1], label=0)


@pytest.fixture
def burst_trace():
    """Sanitized trace with bursts of lengths 2, 3, 1."""
    return Trace.from_arrays(
        [0.0, 0.1, 0.2, 0.4, 0.5, 0.9],
        [1, 1, -1, -1, -1, 1],
        label=1,
    )


def make_random_traces(num_classes: int, per_class: int, length: int = 40, seed: int = 0):
    """Class-dependent random traces (class c prefers incoming with probability (c+1)/(C+1))."""
    rng = np.random.default_rng(seed)
    traces = []
    for label in range(num_classes):
        p_in = (label + 1) / (num_classes + 1)
        for _ in range(per_class):
            times = np.concatenate(([0.0], np.cumsum(rng.uniform(0.01, 0.1, length - 1))))
            directions = np.where(rng.random(length) < p_in, -1, 1)
            directions[0] = 1
            traces.append(Trace.from_arrays(times, directions, label=label))
    return traces


@pytest.fixture
def random_traces():
    return make_random_traces(num_classes=3, per_class=10)


@pytest.fixture
def small_dataset(random_traces):
    return Dataset(traces=random_traces, num_classes=3, trace_length=50)


def make_run_config(**overrides):
    """Fast synthetic run: 3 classes, short traces, a tiny embedding, 2 folds."""
    from src.pipeline.models import RunConfig

    settings = dict(
        synthetic={
            "variant": "template_traces",
            "num_classes": 3,
            "samples_per_class": 20,
            "trace_len": 16,
            "flip_prob": 0.0,
            "seed": 1,
        },
        embedding={
            "conv_blocks": [{"channels": 4, "kernel": 3, "stride": 1}],
            "feature_dim": 8,
            "batch_size": 8,
            "epochs": 5,
            "learning_rate": 0.05,
        },
        trace_length=16,
        num_folds=2,
        seed=3,
    )
    settings.update(overrides)
    return RunConfig(**settings)


@pytest.fixture
def run_config():
    return make_run_config()
