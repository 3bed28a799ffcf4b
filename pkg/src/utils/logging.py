"""
WF Security Estimation - Structured Logging

Provides JSON-formatted logging for trace ingestion, defense simulation,
embedding training and estimation runs. Records are written to standard
error so that command output on stdout stays machine-readable.
"""

import os
import sys
import json
import logging
from typing import Optional
from datetime import datetime, timezone

LOGGER_NAME = "src"

# Extra fields copied from log records into the JSON payload
EXTRA_FIELDS = (
    # ingestion
    "source",
    "num_traces",
    "num_classes",
    "rejected",
    # defenses
    "defense",
    "bandwidth_overhead",
    "latency_overhead",
    # embedding
    "representation",
    "epoch",
    "loss",
    # estimation
    "fold",
    "knn_error",
    "ber_lower",
    "mi_bits",
    "aggregate_ber",
    "aggregate_mi",
    "consistency",
    "successful_folds",
    "failed_folds",
    # errors
    "error_type",
    "details",
    "duration_seconds",
)

_LEVELS = {"debug": "DEBUG", "info": "INFO", "warn": "WARNING", "warning": "WARNING", "error": "ERROR"}


class JSONFormatter(logging.Formatter):
    """
    Custom JSON formatter for structured logging.

    Outputs log records as JSON objects for easy parsing and analysis.
    """

    def format(self, record: logging.LogRecord) -> str:
        """
        Format log record as JSON.

        Args:
            record: Log record to format

        Returns:
            JSON-formatted log string
        """
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        for field in EXTRA_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def setup_logging(log_level: Optional[str] = None) -> logging.Logger:
    """
    Configure structured logging for the package.

    Args:
        log_level: One of debug/info/warn (case-insensitive).
                   Uses WFSE_LOG_LEVEL env var if not provided.

    Returns:
        Configured package logger
    """
    if log_level is None:
        log_level = os.getenv("WFSE_LOG_LEVEL", "info")

    level_name = _LEVELS.get(log_level.lower(), "INFO")

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(getattr(logging, level_name))
    logger.handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JSONFormatter())
    logger.addHandler(handler)

    logger.propagate = False

    return logger


def get_logger() -> logging.Logger:
    """
    Get the package logger, configuring it on first use.

    Returns:
        Logger at the root of the package hierarchy
    """
    logger = logging.getLogger(LOGGER_NAME)

    if not logger.handlers:
        setup_logging()

    return logger


# ============================================================================
# Ingestion and defense events
# ============================================================================


def log_dataset_loaded(source: str, num_traces: int, num_classes: int, rejected: int) -> None:
    """
    Log a loaded and sanitized dataset.

    Args:
        source: Dataset root or manifest path
        num_traces: Accepted traces
        num_classes: Number of classes
        rejected: Traces rejected by sanitization
    """
    get_logger().info(
        "Dataset loaded",
        extra={
            "source": source,
            "num_traces": num_traces,
            "num_classes": num_classes,
            "rejected": rejected,
        }
    )


def log_defense_applied(
    defense: str,
    num_traces: int,
    bandwidth_overhead: float,
    latency_overhead: float,
    duration_seconds: float
) -> None:
    """
    Log dataset-level defense application.

    Args:
        defense: Defense variant name
        num_traces: Number of defended traces
        bandwidth_overhead: Dummy packets per real packet
        latency_overhead: Summed per-packet delay in seconds
        duration_seconds: Wall-clock time spent
    """
    get_logger().info(
        "Defense applied",
        extra={
            "defense": defense,
            "num_traces": num_traces,
            "bandwidth_overhead": bandwidth_overhead,
            "latency_overhead": latency_overhead,
            "duration_seconds": duration_seconds,
        }
    )


# ============================================================================
# Embedding and estimation events
# ============================================================================


def log_embedding_epoch(representation: str, epoch: int, loss: float) -> None:
    """Log mean training loss of one embedding epoch."""
    get_logger().debug(
        "Embedding epoch completed",
        extra={"representation": representation, "epoch": epoch, "loss": loss}
    )


def log_fold_started(fold: int, num_traces: int) -> None:
    """Log the start of one cross-validation fold."""
    get_logger().info("Fold started", extra={"fold": fold, "num_traces": num_traces})


def log_fold_completed(
    fold: int,
    representation: str,
    knn_error: float,
    ber_lower: float,
    mi_bits: float
) -> None:
    """
    Log per-representation estimates of a finished fold.

    Args:
        fold: Fold index
        representation: Representation tag
        knn_error: 1-NN error averaged over both evaluation directions
        ber_lower: Cover-Hart BER estimate
        mi_bits: Ross MI estimate in bits
    """
    get_logger().info(
        "Fold representation estimated",
        extra={
            "fold": fold,
            "representation": representation,
            "knn_error": knn_error,
            "ber_lower": ber_lower,
            "mi_bits": mi_bits,
        }
    )


def log_fold_failed(fold: int, error_type: str, details: str) -> None:
    """Log an aborted fold."""
    get_logger().error(
        "Fold failed",
        extra={"fold": fold, "error_type": error_type, "details": details}
    )


def log_estimation_completed(
    aggregate_ber: Optional[float],
    aggregate_mi: Optional[float],
    successful_folds: int,
    failed_folds: int,
    duration_seconds: float
) -> None:
    """
    Log completion of a full estimation run.

    Args:
        aggregate_ber: Fold-mean of the per-fold minimum BER
        aggregate_mi: Fold-mean of the per-fold maximum MI
        successful_folds: Folds that produced estimates
        failed_folds: Folds aborted with an error
        duration_seconds: Total wall-clock time
    """
    get_logger().info(
        "Estimation completed",
        extra={
            "aggregate_ber": aggregate_ber,
            "aggregate_mi": aggregate_mi,
            "successful_folds": successful_folds,
            "failed_folds": failed_folds,
            "duration_seconds": duration_seconds,
        }
    )
