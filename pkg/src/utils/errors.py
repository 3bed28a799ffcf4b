"""
Exception hierarchy for the WF security estimation toolkit.

Every error raised on purpose by the package derives from WfseError and
carries the process exit code the CLI maps it to:

- ConfigError (2): invalid run configuration or CLI arguments
- DataError (3): unreadable traces, bad datasets, split/estimator failures
- NumericalError (4): non-finite values during training or estimation
"""

from typing import Optional


# ============================================================================
# Base
# ============================================================================

class WfseError(Exception):
    """Base exception for all toolkit errors."""

    exit_code: int = 1


class ConfigError(WfseError):
    """Run configuration or command-line input is invalid."""

    exit_code = 2


class DataError(WfseError):
    """Input data cannot be used (parse failures, empty datasets, bad splits)."""

    exit_code = 3


class NumericalError(WfseError):
    """A computation produced non-finite values."""

    exit_code = 4


# ============================================================================
# Data errors
# ============================================================================

class TraceParseError(DataError):
    """
    A trace file record could not be parsed.

    Attributes:
        line_number: 1-based line of the offending record (None for whole-file errors)
        source: File path or stream name
    """

    def __init__(self, message: str, line_number: Optional[int] = None, source: str = "<stream>"):
        self.line_number = line_number
        self.source = source
        location = f"{source}:{line_number}" if line_number is not None else source
        super().__init__(f"{location}: {message}")


class DatasetError(DataError):
    """Dataset layout, manifest or class balance is invalid."""


class SplitError(DataError):
    """Cross-validation folds cannot be built for the dataset."""


class LeakageError(DataError):
    """Embedding-training samples reached an estimator."""


class EstimatorError(DataError):
    """Estimator preconditions are violated (missing class, too few samples)."""


class ModelFormatError(DataError):
    """An embedding model file is truncated, corrupt or of an unknown version."""


class ReportError(DataError):
    """A report cannot be written or read."""


# ============================================================================
# Numerical errors
# ============================================================================

class EmbeddingDivergenceError(NumericalError):
    """
    Training loss became non-finite.

    Attributes:
        epoch: 1-based epoch of the failing step
        batch: 1-based batch within the epoch
    """

    def __init__(self, epoch: int, batch: int, loss: float):
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
        super().__init__(
            f"Embedding training diverged at epoch {epoch}, batch {batch} (loss={loss})"
        )
