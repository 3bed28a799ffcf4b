"""
Configuration and result models for synthetic oracle datasets.
"""

from dataclasses import dataclass
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter, model_validator

from src.embedding.models import FeatureMatrix
from src.traces.models import Dataset


class _SynthBase(BaseModel):
    samples_per_class: int = Field(default=100, ge=1, description="Samples drawn per class")
    seed: int = Field(default=0, ge=0, lt=2 ** 64)

    model_config = {"extra": "forbid", "frozen": True}


class Gaussian1DSpec(_SynthBase):
    """One-dimensional Gaussians with a shared standard deviation."""
    variant: Literal["gaussian_1d"] = "gaussian_1d"
    means: List[float] = Field(default_factory=lambda: [-1.0, 1.0], min_length=2)
    sigma: float = Field(default=1.0, gt=0.0)

    @property
    def num_classes(self) -> int:
        return len(self.means)


class SeparatedClustersSpec(_SynthBase):
    """Unit-variance Gaussian clusters whose centers are `gap` apart."""
    variant: Literal["separated_clusters"] = "separated_clusters"
    num_classes: int = Field(default=5, ge=2)
    dim: int = Field(default=2, ge=1)
    gap: float = Field(default=100.0, gt=0.0)


class TemplateTracesSpec(_SynthBase):
    """
    Traces built from one direction template per class.

    Position 0 is always outgoing; every later position of a sample flips
    the template sign independently with probability flip_prob. Packets are
    one second apart.
    """
    variant: Literal["template_traces"] = "template_traces"
    num_classes: int = Field(default=2, ge=2)
    flip_prob: float = Field(default=0.1, ge=0.0, le=0.5)
    trace_len: int = Field(default=8, ge=2)

    @model_validator(mode="after")
    def check_template_space(self) -> "TemplateTracesSpec":
        if self.trace_len - 1 < 63 and self.num_classes > 2 ** (self.trace_len - 1):
            raise ValueError(
                f"{self.num_classes} distinct templates do not fit in trace_len={self.trace_len}"
            )
        return self


SynthSpec = Annotated[
    Union[Gaussian1DSpec, SeparatedClustersSpec, TemplateTracesSpec],
    Field(discriminator="variant"),
]

_SYNTH_ADAPTER = TypeAdapter(SynthSpec)


def parse_synth_spec(data: dict):
    """Validate a raw synthetic-data block (raises pydantic.ValidationError)."""
    return _SYNTH_ADAPTER.validate_python(data)


@dataclass
class SynthData:
    """
    Generated samples.

    Attributes:
        features: Feature view of every sample (directional vectors for traces)
        dataset: Trace dataset, for the template_traces variant only
    """
    features: FeatureMatrix
    dataset: Optional[Dataset] = None


@dataclass(frozen=True)
class OracleValue:
    """
    Ground-truth quantity.

    Attributes:
        value: Probability (BER) or bits (MI)
        exact: False for Monte-Carlo estimates
        std_error: Standard error of a Monte-Carlo estimate
        method: closed_form, enumeration, quadrature or monte_carlo
    """
    value: float
    exact: bool
    method: str
    std_error: Optional[float] = None
