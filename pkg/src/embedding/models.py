"""
Configuration and data models for learned trace embeddings.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, List, Literal

import numpy as np
from pydantic import BaseModel, Field

from src.traces.models import RepresentationKind

if TYPE_CHECKING:
    from src.embedding.network import EmbeddingNetwork


# ============================================================================
# Configuration
# ============================================================================


class ConvBlockConfig(BaseModel):
    """One 1-D convolution block."""
    channels: int = Field(..., ge=1, description="Output channels")
    kernel: int = Field(..., ge=1, description="Kernel width in packets")
    stride: int = Field(..., ge=1, description="Stride in packets")

    model_config = {"extra": "forbid", "frozen": True}


def _default_conv_blocks() -> List[ConvBlockConfig]:
    return [
        ConvBlockConfig(channels=32, kernel=8, stride=4),
        ConvBlockConfig(channels=64, kernel=8, stride=4),
    ]


class EmbeddingConfig(BaseModel):
    """
    Architecture and optimizer settings of an embedding network.

    Layer stack: conv blocks (each followed by the activation) -> global
    average pool -> dense(feature_dim) -> activation -> dense(C) head.
    Training is momentum SGD on softmax cross-entropy without early stopping.
    """
    conv_blocks: List[ConvBlockConfig] = Field(default_factory=_default_conv_blocks)
    feature_dim: int = Field(default=128, ge=2, description="Width of the feature layer")
    activation: Literal["relu", "tanh"] = Field(default="relu")
    learning_rate: float = Field(default=0.002, gt=0.0)
    batch_size: int = Field(default=128, ge=1)
    epochs: int = Field(default=40, ge=1)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)

    model_config = {"extra": "forbid"}


# ============================================================================
# Features
# ============================================================================


class FeatureProvenance(str, Enum):
    """Where the columns of a feature matrix come from."""
    MANUAL = "manual"
    LEARNED_DIRECTIONAL = "learned_directional"
    LEARNED_TIMING = "learned_timing"
    SYNTHETIC = "synthetic"

    @classmethod
    def for_representation(cls, kind: RepresentationKind) -> "FeatureProvenance":
        kind = RepresentationKind(kind)
        if kind is RepresentationKind.DIRECTIONAL:
            return cls.LEARNED_DIRECTIONAL
        return cls.LEARNED_TIMING


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """
    n x d feature rows with aligned labels.

    Attributes:
        values: (n, d) finite float64 matrix
        labels: (n,) class indices
        provenance: Source of the features
    """
    values: np.ndarray
    labels: np.ndarray
    provenance: FeatureProvenance

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if values.ndim != 2:
            raise ValueError(f"Feature values must be 2-D, got shape {values.shape}")
        if len(values) != len(labels):
            raise ValueError(f"{len(values)} feature rows but {len(labels)} labels")
        if not np.all(np.isfinite(values)):
            raise ValueError("Feature values must be finite")
        if np.any(labels < 0):
            raise ValueError("Labels must be non-negative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "provenance", FeatureProvenance(self.provenance))

    @property
    def num_samples(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def rows(self, indices) -> "FeatureMatrix":
        """Return the matrix restricted to the given rows."""
        return FeatureMatrix(self.values[indices], self.labels[indices], self.provenance)


# ============================================================================
# Trained models
# ============================================================================


@dataclass
class EmbeddingModel:
    """
    A trained embedding network plus everything needed to reuse it.

    Attributes:
        config: Configuration snapshot used for training
        representation: Representation kind the model consumes
        num_classes: Size of the classifier head
        input_length: Representation length L
        input_scale: Multiplier applied to inputs (1/max|x| for timing)
        network: Layer stack with parameters
        trained: False until training finishes
        loss_history: Mean training loss per epoch
    """
    config: EmbeddingConfig
    representation: RepresentationKind
    num_classes: int
    input_length: int
    input_scale: float
    network: "EmbeddingNetwork"
    trained: bool = False
    loss_history: List[float] = field(default_factory=list)

    @property
    def feature_dim(self) -> int:
        return self.config.feature_dim
