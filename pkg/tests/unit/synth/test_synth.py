"""
Unit tests for synthetic data generation and the ground-truth oracles.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.synth.generator import generate, make_templates
from src.synth.models import Gaussian1DSpec, SeparatedClustersSpec, TemplateTracesSpec, parse_synth_spec
from src.synth.oracles import _enumerate_template_oracle, _monte_carlo_template_oracle, oracle_ber, oracle_mi
from src.traces.models import RepresentationKind


@pytest.mark.unit
class TestSynthSpecs:
    """Tests for synthetic spec validation."""

    def test_discriminated_union(self):
        spec = parse_synth_spec({"variant": "template_traces", "num_classes": 4, "trace_len": 6})

        assert isinstance(spec, TemplateTracesSpec)
        assert spec.num_classes == 4

    def test_flip_prob_range(self):
        with pytest.raises(ValidationError):
            TemplateTracesSpec(flip_prob=0.6)

    def test_too_many_templates(self):
        """Test that 5 classes cannot fit 2^(3-1) = 4 distinct templates."""
        with pytest.raises(ValidationError, match="distinct templates"):
            TemplateTracesSpec(num_classes=5, trace_len=3)

    def test_unknown_variant(self):
        with pytest.raises(ValidationError):
            parse_synth_spec({"variant": "uniform"})


@pytest.mark.unit
class TestGenerate:
    """Tests for generate and make_templates."""

    def test_templates_distinct_and_start_outgoing(self):
        templates = make_templates(TemplateTracesSpec(num_classes=8, trace_len=4))

        assert templates.shape == (8, 4)
        assert np.all(templates[:, 0] == 1)
        assert len({row.tobytes() for row in templates}) == 8

    def test_template_traces_dataset(self):
        # Arrange
        spec = TemplateTracesSpec(num_classes=3, samples_per_class=7, trace_len=10, flip_prob=0.0, seed=2)

        # Act
        data = generate(spec)

        # Assert
        assert data.dataset is not None
        assert len(data.dataset) == 21
        assert data.dataset.class_counts().tolist() == [7, 7, 7]
        templates = make_templates(spec)
        directional = data.dataset.representation(RepresentationKind.DIRECTIONAL)
        assert np.array_equal(directional, templates[data.dataset.labels].astype(float))
        assert np.array_equal(data.features.values, directional)

    def test_traces_are_one_second_apart(self):
        data = generate(TemplateTracesSpec(samples_per_class=1, trace_len=5))

        assert data.dataset.traces[0].times.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]

    def test_deterministic_given_seed(self):
        spec = TemplateTracesSpec(num_classes=4, samples_per_class=20, trace_len=12, flip_prob=0.2, seed=5)

        first, second = generate(spec), generate(spec)

        assert np.array_equal(first.features.values, second.features.values)

    def test_seed_changes_samples(self):
        first = generate(Gaussian1DSpec(seed=1)).features.values
        second = generate(Gaussian1DSpec(seed=2)).features.values

        assert not np.array_equal(first, second)

    def test_gaussian_shapes_and_means(self):
        data = generate(Gaussian1DSpec(means=[-5.0, 5.0], samples_per_class=2000))

        values = data.features.values[:, 0]
        labels = data.features.labels
        assert data.features.values.shape == (4000, 1)
        assert values[labels == 0].mean() == pytest.approx(-5.0, abs=0.1)
        assert values[labels == 1].mean() == pytest.approx(5.0, abs=0.1)

    def test_separated_clusters(self):
        data = generate(SeparatedClustersSpec(num_classes=3, dim=4, samples_per_class=10))

        assert data.features.values.shape == (30, 4)
        assert data.dataset is None


@pytest.mark.unit
class TestOracles:
    """Tests for oracle_ber and oracle_mi."""

    def test_gaussian_pair_ber(self):
        """Test means +-1, sigma 1: Phi(-1)."""
        oracle = oracle_ber(Gaussian1DSpec())

        assert oracle.value == pytest.approx(0.15866, abs=1e-5)
        assert oracle.exact
        assert oracle.method == "closed_form"

    def test_gaussian_pair_mi(self):
        oracle = oracle_mi(Gaussian1DSpec())

        assert oracle.value == pytest.approx(0.486, abs=2e-3)
        assert oracle.method == "quadrature"

    def test_separated_clusters(self):
        spec = SeparatedClustersSpec(num_classes=5)

        assert oracle_ber(spec).value == 0.0
        assert oracle_mi(spec).value == pytest.approx(math.log2(5))

    @pytest.mark.parametrize("num_classes", [2, 4, 16])
    def test_noiseless_templates(self, num_classes):
        spec = TemplateTracesSpec(num_classes=num_classes, trace_len=8, flip_prob=0.0)

        assert oracle_ber(spec).value == pytest.approx(0.0, abs=1e-12)
        assert oracle_mi(spec).value == pytest.approx(math.log2(num_classes), abs=1e-9)

    @pytest.mark.parametrize("num_classes", [2, 4])
    def test_fully_random_templates(self, num_classes):
        spec = TemplateTracesSpec(num_classes=num_classes, trace_len=8, flip_prob=0.5)

        assert oracle_ber(spec).value == pytest.approx((num_classes - 1) / num_classes, abs=1e-12)
        assert oracle_mi(spec).value == pytest.approx(0.0, abs=1e-12)

    def test_single_flip_position(self):
        """Test C=2, trace_len=2: templates differ in one position, so BER = p."""
        spec = TemplateTracesSpec(num_classes=2, trace_len=2, flip_prob=0.2)

        assert oracle_ber(spec).value == pytest.approx(0.2)
        assert oracle_mi(spec).value == pytest.approx(1.0 - (-(0.2 * math.log2(0.2) + 0.8 * math.log2(0.8))))

    @pytest.mark.slow
    def test_monte_carlo_agrees_with_enumeration(self):
        # Arrange
        spec = TemplateTracesSpec(num_classes=4, trace_len=10, flip_prob=0.2, seed=3)

        # Act
        exact_ber, exact_mi = _enumerate_template_oracle(spec)
        mc_ber, mc_mi = _monte_carlo_template_oracle(spec)

        # Assert
        assert abs(mc_ber.value - exact_ber) <= 5 * mc_ber.std_error + 1e-4
        assert abs(mc_mi.value - exact_mi) <= 5 * mc_mi.std_error + 1e-4
        assert not mc_ber.exact
