"""
Pydantic result models for the BER and MI estimators.
"""

import math
from enum import Enum
from typing import List, Literal

from pydantic import BaseModel, Field, computed_field, model_validator

# Slack for float comparisons in result invariants
_TOLERANCE = 1e-12


class KnnBackend(str, Enum):
    """Nearest-neighbor search backend."""
    AUTO = "auto"
    BRUTE_FORCE = "brute_force"
    SPATIAL_TREE = "spatial_tree"


class EstimatorSettings(BaseModel):
    """Estimator knobs of a run."""
    k_mi: int = Field(default=5, ge=1, description="Neighbors for the MI estimator")
    knn_backend: KnnBackend = Field(default=KnnBackend.AUTO)

    model_config = {"extra": "forbid"}


# ============================================================================
# BER
# ============================================================================


class RepresentationBer(BaseModel):
    """
    BER estimate of one feature representation.

    Attributes:
        tag: Representation tag (feature provenance)
        knn_error: Mean 1-NN error over E1->E2 and E2->E1
        knn_error_forward: Error training on E1, testing on E2
        knn_error_backward: Error training on E2, testing on E1
        lower_bound: Cover-Hart transformed error, clamped to [0, (C-1)/C]
    """
    tag: str
    knn_error: float = Field(..., ge=0.0, le=1.0)
    knn_error_forward: float = Field(..., ge=0.0, le=1.0)
    knn_error_backward: float = Field(..., ge=0.0, le=1.0)
    lower_bound: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_order(self) -> "RepresentationBer":
        if self.lower_bound > self.knn_error + _TOLERANCE:
            raise ValueError(f"lower bound {self.lower_bound} exceeds kNN error {self.knn_error}")
        return self


class BerEstimate(BaseModel):
    """BER estimates per representation and their minimum."""
    num_classes: int = Field(..., ge=2)
    breakdown: List[RepresentationBer] = Field(..., min_length=1)

    @computed_field
    @property
    def aggregate(self) -> float:
        return min(r.lower_bound for r in self.breakdown)

    @computed_field
    @property
    def best_representation(self) -> str:
        return min(self.breakdown, key=lambda r: r.lower_bound).tag


# ============================================================================
# MI
# ============================================================================


class MiComponent(BaseModel):
    """
    Output of one Ross estimator evaluation.

    Attributes:
        value_bits: Estimate clamped to [0, log2 C]
        raw_bits: Unclamped estimate
        clamped: True if raw_bits fell outside [0, log2 C]
        k: Requested neighbor count
        reduced_k_samples: Samples whose class was too small for k
    """
    value_bits: float = Field(..., ge=0.0)
    raw_bits: float
    clamped: bool
    k: int = Field(..., ge=1)
    reduced_k_samples: int = Field(default=0, ge=0)
    num_samples: int = Field(..., ge=2)
    num_classes: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_range(self) -> "MiComponent":
        upper = math.log2(max(self.num_classes, 1))
        if self.value_bits > upper + _TOLERANCE:
            raise ValueError(f"MI {self.value_bits} exceeds log2 C = {upper}")
        return self


class RepresentationMi(BaseModel):
    """MI estimate of one representation, averaged over the evaluation halves."""
    tag: str
    mi_bits: float = Field(..., ge=0.0)
    mi_first: float = Field(..., ge=0.0)
    mi_second: float = Field(..., ge=0.0)
    clamped: bool
    k: int = Field(..., ge=1)


class MiEstimate(BaseModel):
    """MI estimates per representation and their maximum."""
    num_classes: int = Field(..., ge=2)
    breakdown: List[RepresentationMi] = Field(..., min_length=1)
    unit: Literal["bits"] = "bits"

    @computed_field
    @property
    def aggregate(self) -> float:
        return max(r.mi_bits for r in self.breakdown)

    @computed_field
    @property
    def best_representation(self) -> str:
        return max(self.breakdown, key=lambda r: r.mi_bits).tag
