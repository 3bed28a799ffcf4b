"""
Pydantic models for run configuration, cross-validation plans and reports.
"""

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src.bounds.models import ConsistencyResult
from src.defenses.models import DEFENSE_PRESETS, DefenseSpec
from src.embedding.models import EmbeddingConfig
from src.estimators.models import EstimatorSettings
from src.synth.models import TemplateTracesSpec
from src.traces.models import DEFAULT_TRACE_LENGTH, RepresentationKind
from src.utils.errors import ConfigError
from src.utils.validation import validate_seed

DEFAULT_NUM_FOLDS = 5


# ============================================================================
# Configuration
# ============================================================================


class RunConfig(BaseModel):
    """
    Full configuration of an estimation run.

    Exactly one data source is set: `dataset_root` (trace directory) or
    `synthetic` (generated template traces). A defense block may name a
    preset: {"preset": "tamaraw", "seed": 1}.

    Example:
        >>> cfg = RunConfig(dataset_root="data/awf", seed=7)
        >>> [k.value for k in cfg.representations]
        ['directional', 'timing']
    """
    dataset_root: Optional[str] = Field(None, description="Trace dataset directory")
    synthetic: Optional[TemplateTracesSpec] = Field(None, description="Synthetic template-trace source")
    defense: Optional[DefenseSpec] = Field(None, description="Defense applied before splitting")
    representations: List[RepresentationKind] = Field(
        default_factory=lambda: [RepresentationKind.DIRECTIONAL, RepresentationKind.TIMING],
        min_length=1,
    )
    include_manual_features: bool = False
    baseline_classifier_error: bool = True
    embedding: EmbeddingConfig = Field(default_factory=EmbeddingConfig)
    estimator: EstimatorSettings = Field(default_factory=EstimatorSettings)
    trace_length: int = Field(default=DEFAULT_TRACE_LENGTH, ge=1)
    num_folds: int = Field(default=DEFAULT_NUM_FOLDS, ge=2)
    folds: Optional[List[int]] = Field(None, description="Fold indices to run (default: all)")
    seed: int = Field(default=0, description="Master seed in [0, 2^64)")
    threads: int = Field(default=1, ge=1)
    output: Optional[str] = Field(None, description="Report path (JSON; CSV written alongside)")
    model_dir: Optional[str] = Field(None, description="Directory for trained embedding models (reused when matching)")

    model_config = {"extra": "forbid"}

    @field_validator("defense", mode="before")
    @classmethod
    def expand_preset(cls, value):
        if isinstance(value, dict) and "preset" in value:
            name = value["preset"]
            if name not in DEFENSE_PRESETS:
                raise ValueError(f"Unknown defense preset {name!r}")
            extra = {k: v for k, v in value.items() if k != "preset"}
            return {**DEFENSE_PRESETS[name], **extra}
        return value

    @field_validator("seed", mode="before")
    @classmethod
    def check_seed(cls, value):
        ok, message = validate_seed(value)
        if not ok:
            raise ValueError(message)
        return value

    @field_validator("representations")
    @classmethod
    def unique_representations(cls, value: List[RepresentationKind]) -> List[RepresentationKind]:
        if len(set(value)) != len(value):
            raise ValueError("Representations must not repeat")
        return value

    @model_validator(mode="after")
    def check_sources(self) -> "RunConfig":
        if (self.dataset_root is None) == (self.synthetic is None):
            raise ValueError("Exactly one of dataset_root and synthetic must be set")
        if self.folds is not None:
            bad = [f for f in self.folds if not 0 <= f < self.num_folds]
            if bad or not self.folds:
                raise ValueError(f"Fold indices must be within [0, {self.num_folds}), got {self.folds}")
        return self

    @property
    def fold_indices(self) -> List[int]:
        return sorted(set(self.folds)) if self.folds is not None else list(range(self.num_folds))

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "RunConfig":
        """
        Load a JSON run configuration.

        Relative `dataset_root`, `output` and `model_dir` paths resolve against the
        config file's directory.

        Raises:
            ConfigError: If the file is missing or not valid JSON
            pydantic.ValidationError: If a field is invalid
        """
        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config {path} must contain a JSON object")

        for key in ("dataset_root", "output", "model_dir"):
            if isinstance(data.get(key), str) and not Path(data[key]).is_absolute():
                data[key] = str(path.parent / data[key])
        return cls(**data)

    def with_env(self) -> "RunConfig":
        """
        Overlay WFSE_SEED, WFSE_THREADS and WFSE_OUTPUT environment variables.

        Raises:
            ConfigError: If a variable is not a valid value
        """
        updates = {}
        try:
            if os.getenv("WFSE_SEED"):
                updates["seed"] = int(os.environ["WFSE_SEED"])
            if os.getenv("WFSE_THREADS"):
                updates["threads"] = int(os.environ["WFSE_THREADS"])
        except ValueError as e:
            raise ConfigError(f"Invalid environment override: {e}") from e
        if os.getenv("WFSE_OUTPUT"):
            updates["output"] = os.environ["WFSE_OUTPUT"]
        return self.with_overrides(**updates)

    def with_overrides(self, **overrides) -> "RunConfig":
        """Return a validated copy with non-None overrides applied."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        return RunConfig(**{**self.model_dump(), **updates})


# ============================================================================
# Cross-validation plan
# ============================================================================


@dataclass(frozen=True)
class Fold:
    """
    One cross-validation fold.

    Attributes:
        index: Fold number
        train: Dataset rows used to train the embeddings (all other folds)
        first: Evaluation half E1
        second: Evaluation half E2
    """
    index: int
    train: np.ndarray
    first: np.ndarray
    second: np.ndarray

    @property
    def evaluation(self) -> np.ndarray:
        return np.concatenate([self.first, self.second])


@dataclass(frozen=True)
class SplitPlan:
    """Stratified folds plus the number of samples dropped for divisibility."""
    folds: List[Fold]
    dropped: int
    usable_per_class: Dict[int, int]

    @property
    def num_folds(self) -> int:
        return len(self.folds)


# ============================================================================
# Reports
# ============================================================================


class RepresentationResult(BaseModel):
    """Estimates of one representation in one fold."""
    representation: str
    knn_error: float = Field(..., ge=0.0, le=1.0)
    ber_lower: float = Field(..., ge=0.0, le=1.0)
    mi_bits: float = Field(..., ge=0.0)
    mi_clamped: bool = False
    baseline_error: Optional[float] = Field(None, ge=0.0, le=1.0)


class FoldResult(BaseModel):
    """Outcome of one fold; failed folds carry the error instead of estimates."""
    fold: int = Field(..., ge=0)
    status: Literal["ok", "failed"]
    error_type: Optional[str] = None
    error_message: Optional[str] = None
    num_train: int = Field(default=0, ge=0)
    num_eval: int = Field(default=0, ge=0)
    representations: List[RepresentationResult] = Field(default_factory=list)
    ber_min: Optional[float] = None
    mi_max: Optional[float] = None
    best_ber_representation: Optional[str] = None
    best_mi_representation: Optional[str] = None
    baseline_error: Optional[float] = None
    consistency: Optional[ConsistencyResult] = None
    timing_seconds: Dict[str, float] = Field(default_factory=dict)

    @property
    def succeeded(self) -> bool:
        return self.status == "ok"


class AggregateStat(BaseModel):
    """Fold mean, with the sample standard deviation when >= 2 folds exist."""
    mean: float
    std: Optional[float] = None
    values: List[float] = Field(..., min_length=1)

    @classmethod
    def from_values(cls, values: List[float]) -> "AggregateStat":
        array = np.asarray(values, dtype=np.float64)
        std = float(array.std(ddof=1)) if len(array) >= 2 else None
        return cls(mean=float(array.mean()), std=std, values=[float(v) for v in values])


class Provenance(BaseModel):
    tool_version: str
    config: dict
    config_hash: str
    master_seed: int
    fold_seeds: Dict[str, int] = Field(default_factory=dict)


class EstimateReport(BaseModel):
    """
    Full result of an estimation run.

    Aggregate BER is the fold mean of the per-fold minimum over
    representations; aggregate MI is the fold mean of the per-fold maximum.
    """
    num_classes: int = Field(..., ge=2)
    class_names: List[str] = Field(default_factory=list)
    num_traces: int = Field(..., ge=0)
    dropped_samples: int = Field(default=0, ge=0)
    rejected_traces: Dict[str, int] = Field(default_factory=dict)
    defense: Optional[dict] = None
    overhead: Optional[Dict[str, float]] = None
    folds: List[FoldResult] = Field(default_factory=list)
    aggregate_ber: Optional[AggregateStat] = None
    aggregate_mi: Optional[AggregateStat] = None
    per_representation_ber: Dict[str, float] = Field(default_factory=dict)
    per_representation_mi: Dict[str, float] = Field(default_factory=dict)
    baseline_error: Optional[AggregateStat] = None
    consistency: Optional[ConsistencyResult] = None
    provenance: Provenance
    timing_seconds: Dict[str, float] = Field(default_factory=dict)

    @property
    def successful_folds(self) -> List[FoldResult]:
        return [f for f in self.folds if f.succeeded]

    @property
    def failed_folds(self) -> List[FoldResult]:
        return [f for f in self.folds if not f.succeeded]


class ConvergencePoint(BaseModel):
    """Aggregate estimates at one traces-per-class subsample size."""
    traces_per_class: int = Field(..., ge=1)
    num_traces: int = Field(..., ge=0)
    aggregate_ber: Optional[AggregateStat] = None
    aggregate_mi: Optional[AggregateStat] = None
    successful_folds: int = Field(default=0, ge=0)
