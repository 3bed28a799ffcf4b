"""
Synthetic dataset generation.
"""

import logging

import numpy as np

from src.embedding.models import FeatureMatrix, FeatureProvenance
from src.synth.models import Gaussian1DSpec, SeparatedClustersSpec, SynthData, TemplateTracesSpec
from src.traces.models import Dataset, RepresentationKind, Trace
from src.utils.hashing import derive_seed, make_rng

logger = logging.getLogger(__name__)


def make_templates(spec: TemplateTracesSpec) -> np.ndarray:
    """
    Draw C distinct direction templates.

    Returns:
        (C, trace_len) int8 matrix of +1/-1 with column 0 all +1
    """
    rng = make_rng(derive_seed(spec.seed, "templates"))
    seen = set()
    templates = []
    while len(templates) < spec.num_classes:
        tail = np.where(rng.random(spec.trace_len - 1) < 0.5, -1, 1).astype(np.int8)
        key = tail.tobytes()
        if key in seen:
            continue
        seen.add(key)
        templates.append(np.concatenate(([1], tail)).astype(np.int8))
    return np.vstack(templates)


def _labels(num_classes: int, per_class: int) -> np.ndarray:
    return np.repeat(np.arange(num_classes), per_class)


def generate_template_traces(spec: TemplateTracesSpec) -> SynthData:
    templates = make_templates(spec)
    rng = make_rng(derive_seed(spec.seed, "samples"))
    times = np.arange(spec.trace_len, dtype=np.float64)

    traces = []
    for label in _labels(spec.num_classes, spec.samples_per_class):
        flips = np.concatenate(([False], rng.random(spec.trace_len - 1) < spec.flip_prob))
        directions = np.where(flips, -templates[label], templates[label]).astype(np.int8)
        traces.append(Trace.from_arrays(times, directions, label=int(label)))

    dataset = Dataset(
        traces=traces,
        num_classes=spec.num_classes,
        trace_length=spec.trace_len,
    )
    features = FeatureMatrix(
        dataset.representation(RepresentationKind.DIRECTIONAL),
        dataset.labels,
        FeatureProvenance.SYNTHETIC,
    )
    return SynthData(features=features, dataset=dataset)


def generate(spec) -> SynthData:
    """
    Generate a synthetic dataset.

    Args:
        spec: Gaussian1DSpec, SeparatedClustersSpec or TemplateTracesSpec

    Returns:
        SynthData, deterministic given spec.seed

    Example:
        >>> data = generate(Gaussian1DSpec(samples_per_class=10))
        >>> data.features.values.shape
        (20, 1)
    """
    if isinstance(spec, TemplateTracesSpec):
        data = generate_template_traces(spec)
    else:
        rng = make_rng(derive_seed(spec.seed, "features"))
        labels = _labels(spec.num_classes, spec.samples_per_class)

        if isinstance(spec, Gaussian1DSpec):
            means = np.asarray(spec.means)[labels]
            values = (means + spec.sigma * rng.standard_normal(len(labels)))[:, None]
        elif isinstance(spec, SeparatedClustersSpec):
            values = rng.standard_normal((len(labels), spec.dim))
            values[:, 0] += spec.gap * labels
        else:
            raise TypeError(f"Unsupported synthetic spec {type(spec).__name__}")

        data = SynthData(features=FeatureMatrix(values, labels, FeatureProvenance.SYNTHETIC))

    logger.debug(f"Generated {spec.variant} data: {data.features.num_samples} samples")
    return data
