"""
Unit tests for the command-line interface.
"""

import json
import re
from pathlib import Path

import pytest
from click.testing import CliRunner

from src import __version__
from src.cli.main import cli, main
from src.traces.parser import MANIFEST_NAME
from tests.conftest import make_run_config


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args), obj={})


@pytest.mark.unit
class TestBoundsCommands:
    """Tests for bounds and merged-oracle."""

    def test_bounds_table(self, runner):
        result = invoke(runner, "bounds", "--classes", "4", "--points", "11")

        assert result.exit_code == 0
        assert "Feasible region, C=4" in result.output
        assert "2.0000" in result.output

    def test_bounds_csv(self, runner, tmp_path):
        target = tmp_path / "region.csv"

        result = invoke(runner, "--out", str(target), "bounds", "--classes", "2", "--points", "5")

        assert result.exit_code == 0
        assert target.read_text().splitlines()[0] == "R,fano_bits,kovalevskij_bits"

    def test_consistency_check(self, runner):
        result = invoke(runner, "bounds", "--classes", "2", "--ber", "0.5", "--mi", "0.9")

        assert result.exit_code == 0
        assert "mi_above_kovalevskij" in result.output

    def test_ber_without_mi(self, runner):
        result = invoke(runner, "bounds", "--classes", "2", "--ber", "0.1")

        assert result.exit_code == 2

    def test_merged_oracle(self, runner):
        result = invoke(runner, "merged-oracle", "--classes", "10", "--max-m", "4")

        assert result.exit_code == 0
        assert "0.7500" in result.output

    def test_merged_oracle_m_above_c(self, runner):
        result = invoke(runner, "merged-oracle", "--classes", "3", "--max-m", "5")

        assert result.exit_code == 2


@pytest.mark.unit
class TestDataCommands:
    """Tests for synth, features and defend."""

    def test_synth_prints_oracles(self, runner):
        result = invoke(runner, "synth", "--variant", "gaussian_1d")

        assert result.exit_code == 0
        assert "0.158655" in result.output
        assert "closed_form" in result.output

    def test_synth_rejects_bad_spec(self, runner):
        result = invoke(runner, "synth", "--flip-prob", "0.9")

        assert result.exit_code == 2

    def test_synth_features_and_defend(self, runner, tmp_path):
        # Arrange
        dataset_dir = tmp_path / "synthetic"

        # Act
        synth = invoke(
            runner, "--out", str(dataset_dir), "--seed", "4",
            "synth", "--num-classes", "3", "--samples-per-class", "4", "--trace-len", "12",
        )
        features = invoke(runner, "--out", str(tmp_path / "features.csv"), "features", str(dataset_dir))
        defend = invoke(runner, "--out", str(tmp_path / "defended"), "defend", str(dataset_dir), "--preset", "tamaraw")

        # Assert
        assert synth.exit_code == 0
        assert (dataset_dir / MANIFEST_NAME).exists()
        assert features.exit_code == 0
        assert len((tmp_path / "features.csv").read_text().splitlines()) == 13
        assert defend.exit_code == 0
        assert (tmp_path / "defended" / MANIFEST_NAME).exists()
        assert "bandwidth_overhead" in defend.output

    def test_synth_gaussian_writes_feature_csv(self, runner, tmp_path):
        target = tmp_path / "gauss.csv"

        result = invoke(runner, "--out", str(target), "synth", "--variant", "gaussian_1d", "--samples-per-class", "5")

        assert result.exit_code == 0
        assert target.read_text().splitlines()[0] == "x0,label"

    def test_defend_needs_one_defense(self, runner, tmp_path):
        result = invoke(runner, "--out", str(tmp_path / "x"), "defend", str(tmp_path))

        assert result.exit_code == 2

    def test_defend_needs_output(self, runner, tmp_path):
        result = invoke(runner, "defend", str(tmp_path), "--preset", "tamaraw")

        assert result.exit_code == 2

    def test_missing_dataset_is_data_error(self, runner, tmp_path):
        result = invoke(runner, "--out", str(tmp_path / "f.csv"), "features", str(tmp_path))

        assert result.exit_code == 3

    def test_undecodable_trace_is_data_error(self, runner, tmp_path):
        folder = tmp_path / "data" / "site-a"
        folder.mkdir(parents=True)
        (folder / "0.txt").write_bytes(b"0.0\t1\n\xff\xfe\t-1\n")

        result = invoke(runner, "--out", str(tmp_path / "f.csv"), "features", str(tmp_path / "data"))

        assert result.exit_code == 3


@pytest.mark.unit
class TestEstimateCommands:
    """Tests for estimate and report."""

    def test_estimate_requires_config(self, runner):
        result = invoke(runner, "estimate")

        assert result.exit_code == 2

    def test_invalid_config_exit_code(self, runner, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"dataset_root": "a", "num_folds": 1}))

        result = invoke(runner, "--config", str(path), "estimate")

        assert result.exit_code == 2

    def test_estimate_and_report(self, runner, tmp_path):
        # Arrange
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps(make_run_config().model_dump(mode="json")))
        report_path = tmp_path / "results" / "run.json"

        # Act
        estimate = invoke(runner, "--config", str(config_path), "--out", str(report_path), "estimate")
        (tmp_path / "results" / "run.csv").unlink()
        rendered = invoke(runner, "report", str(report_path))

        # Assert
        assert estimate.exit_code == 0
        assert "Security estimate" in estimate.output
        assert rendered.exit_code == 0
        assert (tmp_path / "results" / "run.csv").exists()

    def test_estimate_saves_models(self, runner, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps(make_run_config().model_dump(mode="json")))

        result = invoke(runner, "--config", str(config_path), "estimate", "--model-dir", str(tmp_path / "models"))

        assert result.exit_code == 0
        assert len(list((tmp_path / "models").glob("*.wfse"))) == 4

    def test_convergence_rejects_bad_sizes(self, runner, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps(make_run_config().model_dump(mode="json")))

        result = invoke(runner, "--config", str(config_path), "convergence", "--sizes", "8,x")

        assert result.exit_code == 2


@pytest.mark.unit
def test_version(runner):
    result = invoke(runner, "--version")

    assert result.exit_code == 0
    assert __version__ in result.output


@pytest.mark.unit
def test_console_script_entry(monkeypatch, capsys):
    """Test that the `wfse` console script points at main and main parses argv."""
    pyproject = (Path(__file__).resolve().parents[3] / "pyproject.toml").read_text()
    monkeypatch.setattr("sys.argv", ["wfse", "--version"])

    with pytest.raises(SystemExit) as excinfo:
        main()

    assert re.search(r'^wfse = "src\.cli\.main:main"$', pyproject, re.MULTILINE)
    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out
