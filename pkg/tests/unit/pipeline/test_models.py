"""
Unit tests for run configuration and report models.
"""

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from src.defenses.models import ConstantRateSpec, MergeSpec
from src.pipeline.models import AggregateStat, RunConfig
from src.traces.models import RepresentationKind
from src.utils.errors import ConfigError

EXAMPLE_CONFIG = Path(__file__).resolve().parents[3] / "data" / "configs" / "example_run.json"


@pytest.mark.unit
class TestRunConfig:
    """Tests for RunConfig validation and loading."""

    def test_defaults(self):
        cfg = RunConfig(dataset_root="data/traces")

        assert cfg.representations == [RepresentationKind.DIRECTIONAL, RepresentationKind.TIMING]
        assert cfg.num_folds == 5
        assert cfg.fold_indices == [0, 1, 2, 3, 4]
        assert cfg.estimator.k_mi == 5

    @pytest.mark.parametrize("sources", [
        {},
        {"dataset_root": "a", "synthetic": {"variant": "template_traces"}},
    ])
    def test_exactly_one_source(self, sources):
        with pytest.raises(ValidationError, match="Exactly one"):
            RunConfig(**sources)

    def test_defense_preset_expanded(self):
        cfg = RunConfig(dataset_root="a", defense={"preset": "tamaraw", "seed": 4})

        assert isinstance(cfg.defense, ConstantRateSpec)
        assert cfg.defense.pad_multiple == 50
        assert cfg.defense.seed == 4

    def test_unknown_preset(self):
        with pytest.raises(ValidationError, match="Unknown defense preset"):
            RunConfig(dataset_root="a", defense={"preset": "nope"})

    @pytest.mark.parametrize("seed", [-1, 2 ** 64, True, 1.5])
    def test_invalid_seed(self, seed):
        with pytest.raises(ValidationError, match="Seed must"):
            RunConfig(dataset_root="a", seed=seed)

    def test_largest_seed_accepted(self):
        assert RunConfig(dataset_root="a", seed=2 ** 64 - 1).seed == 2 ** 64 - 1

    def test_repeated_representation(self):
        with pytest.raises(ValidationError, match="must not repeat"):
            RunConfig(dataset_root="a", representations=["timing", "timing"])

    def test_fold_subset(self):
        cfg = RunConfig(dataset_root="a", num_folds=4, folds=[3, 1, 3])

        assert cfg.fold_indices == [1, 3]

    def test_fold_out_of_range(self):
        with pytest.raises(ValidationError, match="Fold indices"):
            RunConfig(dataset_root="a", num_folds=3, folds=[3])

    def test_unknown_field_rejected(self):
        with pytest.raises(ValidationError):
            RunConfig(dataset_root="a", folds_count=3)

    def test_from_file_resolves_relative_paths(self, tmp_path):
        # Arrange
        config_dir = tmp_path / "configs"
        config_dir.mkdir()
        path = config_dir / "run.json"
        path.write_text(json.dumps({
            "dataset_root": "../traces",
            "output": "/abs/report.json",
            "defense": {"variant": "merge", "m": 2},
        }))

        # Act
        cfg = RunConfig.from_file(path)

        # Assert
        assert cfg.dataset_root == str(config_dir / "../traces")
        assert cfg.output == "/abs/report.json"
        assert isinstance(cfg.defense, MergeSpec)

    def test_from_file_missing(self, tmp_path):
        with pytest.raises(ConfigError, match="Cannot read config"):
            RunConfig.from_file(tmp_path / "missing.json")

    def test_from_file_bad_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json")

        with pytest.raises(ConfigError, match="not valid JSON"):
            RunConfig.from_file(path)

    def test_from_file_not_an_object(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]")

        with pytest.raises(ConfigError, match="JSON object"):
            RunConfig.from_file(path)

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("WFSE_SEED", "42")
        monkeypatch.setenv("WFSE_THREADS", "3")
        monkeypatch.setenv("WFSE_OUTPUT", "out/report.json")

        cfg = RunConfig(dataset_root="a").with_env()

        assert (cfg.seed, cfg.threads, cfg.output) == (42, 3, "out/report.json")

    def test_invalid_env_override(self, monkeypatch):
        monkeypatch.setenv("WFSE_SEED", "seven")

        with pytest.raises(ConfigError, match="environment"):
            RunConfig(dataset_root="a").with_env()

    def test_overrides_skip_none_and_revalidate(self):
        cfg = RunConfig(dataset_root="a", seed=1)

        assert cfg.with_overrides(seed=None) is cfg
        assert cfg.with_overrides(seed=5).seed == 5
        with pytest.raises(ValidationError):
            cfg.with_overrides(threads=0)

    def test_example_config_loads(self):
        cfg = RunConfig.from_file(EXAMPLE_CONFIG)

        assert cfg.synthetic.num_classes == 5
        assert isinstance(cfg.defense, MergeSpec)
        assert cfg.output.endswith("results/example_run.json")


@pytest.mark.unit
class TestAggregateStat:
    """Tests for AggregateStat.from_values."""

    def test_mean_and_sample_std(self):
        stat = AggregateStat.from_values([0.1, 0.2, 0.3])

        assert stat.mean == pytest.approx(0.2)
        assert stat.std == pytest.approx(0.1)
        assert stat.values == [0.1, 0.2, 0.3]

    def test_single_value_has_no_std(self):
        stat = AggregateStat.from_values([0.4])

        assert stat.mean == 0.4
        assert stat.std is None

    def test_empty_rejected(self):
        with pytest.raises((ValidationError, ValueError)):
            AggregateStat(mean=0.0, values=[])
