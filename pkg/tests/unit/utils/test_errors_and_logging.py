"""
Unit tests for the exception hierarchy, seeding and structured logging.
"""

import json
import logging

import numpy as np
import pytest

from src.utils.errors import (
    ConfigError,
    DataError,
    EmbeddingDivergenceError,
    EstimatorError,
    LeakageError,
    NumericalError,
    ReportError,
    TraceParseError,
    WfseError,
)
from src.utils.hashing import compute_content_hash, derive_seed, make_rng
from src.utils.logging import JSONFormatter, log_fold_completed, setup_logging


@pytest.mark.unit
class TestErrors:
    """Tests for exit codes and error messages."""

    @pytest.mark.parametrize("error,code", [
        (WfseError("x"), 1),
        (ConfigError("x"), 2),
        (DataError("x"), 3),
        (EstimatorError("x"), 3),
        (LeakageError("x"), 3),
        (ReportError("x"), 3),
        (NumericalError("x"), 4),
        (EmbeddingDivergenceError(2, 5, float("nan")), 4),
    ])
    def test_exit_codes(self, error, code):
        assert error.exit_code == code
        assert isinstance(error, WfseError)

    def test_parse_error_location(self):
        error = TraceParseError("invalid direction '2'", line_number=7, source="a.txt")

        assert str(error) == "a.txt:7: invalid direction '2'"
        assert error.line_number == 7

    def test_parse_error_without_line(self):
        assert str(TraceParseError("trace contains no packets", source="b.txt")) == "b.txt: trace contains no packets"

    def test_divergence_message(self):
        error = EmbeddingDivergenceError(3, 12, float("inf"))

        assert "epoch 3, batch 12" in str(error)
        assert error.epoch == 3


@pytest.mark.unit
class TestSeeding:
    """Tests for derive_seed, make_rng and compute_content_hash."""

    def test_derive_seed_is_stable(self):
        assert derive_seed(7, "fold", 0) == derive_seed(7, "fold", 0)
        assert derive_seed(7, "fold", 0) != derive_seed(7, "fold", 1)
        assert derive_seed(7, "fold", 0) != derive_seed(8, "fold", 0)

    def test_derive_seed_separates_parts(self):
        assert derive_seed(1, "ab", "c") != derive_seed(1, "a", "bc")

    def test_derive_seed_is_64_bit(self):
        assert 0 <= derive_seed(2 ** 64 - 1, "x") < 2 ** 64

    def test_make_rng_reproducible(self):
        first = make_rng(123).random(5)
        second = make_rng(123).random(5)

        assert np.array_equal(first, second)
        assert isinstance(make_rng(0).bit_generator, np.random.Philox)

    def test_content_hash(self):
        assert compute_content_hash("abc") == compute_content_hash(b"abc")
        assert compute_content_hash("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


@pytest.mark.unit
class TestStructuredLogging:
    """Tests for the JSON formatter and event helpers."""

    def test_formatter_includes_extra_fields(self):
        # Arrange
        record = logging.LogRecord("src.pipeline", logging.INFO, __file__, 1, "Fold failed", None, None)
        record.fold = 3
        record.error_type = "EstimatorError"
        record.unrelated = "ignored"

        # Act
        payload = json.loads(JSONFormatter().format(record))

        # Assert
        assert payload["level"] == "INFO"
        assert payload["message"] == "Fold failed"
        assert payload["fold"] == 3
        assert payload["error_type"] == "EstimatorError"
        assert "unrelated" not in payload
        assert payload["timestamp"].endswith("Z")

    def test_setup_logging_level(self, monkeypatch):
        monkeypatch.setenv("WFSE_LOG_LEVEL", "debug")

        logger = setup_logging()

        assert logger.level == logging.DEBUG
        assert setup_logging("warn").level == logging.WARNING
        assert len(logger.handlers) == 1

    def test_event_helper_writes_json_to_stderr(self, capsys):
        setup_logging("info")

        log_fold_completed(1, "learned_timing", 0.2, 0.11, 1.7)

        line = capsys.readouterr().err.strip().splitlines()[-1]
        payload = json.loads(line)
        assert payload["representation"] == "learned_timing"
        assert payload["mi_bits"] == 1.7
