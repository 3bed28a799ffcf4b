"""
Pydantic configuration models for defense simulators.

A defense block in a run configuration is a discriminated union keyed on
`variant`:

    {"variant": "front", "n_client": 1700, "n_server": 1700,
     "w_min": 1.0, "w_max": 14.0, "seed": 3}
"""

from dataclasses import dataclass
from typing import Annotated, Dict, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter, model_validator


# ============================================================================
# Defense variants
# ============================================================================


class _DefenseBase(BaseModel):
    seed: int = Field(default=0, ge=0, lt=2 ** 64, description="Master RNG seed for the defense")

    model_config = {"extra": "forbid", "frozen": True}


class ConstantRateSpec(_DefenseBase):
    """
    Simplified Tamaraw: fixed-interval slots per direction with tail padding.
    """
    variant: Literal["constant_rate"] = "constant_rate"
    rho_out: float = Field(default=0.04, gt=0.0, description="Seconds between outgoing slots")
    rho_in: float = Field(default=0.012, gt=0.0, description="Seconds between incoming slots")
    pad_multiple: int = Field(default=50, ge=1, description="Per-direction packet count multiple")


class FrontSpec(_DefenseBase):
    """FRONT zero-delay padding with Rayleigh-distributed dummy schedules."""
    variant: Literal["front"] = "front"
    n_client: int = Field(default=1700, ge=1, description="Max outgoing dummies")
    n_server: int = Field(default=1700, ge=1, description="Max incoming dummies")
    w_min: float = Field(default=1.0, gt=0.0, description="Min Rayleigh scale (s)")
    w_max: float = Field(default=14.0, gt=0.0, description="Max Rayleigh scale (s)")

    @model_validator(mode="after")
    def check_window(self) -> "FrontSpec":
        if self.w_min > self.w_max:
            raise ValueError(f"w_min ({self.w_min}) must not exceed w_max ({self.w_max})")
        return self


class MergeSpec(_DefenseBase):
    """Overlay M simultaneous page loads (target plus M-1 decoys)."""
    variant: Literal["merge"] = "merge"
    m: int = Field(default=2, ge=1, description="Number of merged page loads")


class ExternalSpec(_DefenseBase):
    """Traces already defended by a third-party simulator; applied as identity."""
    variant: Literal["external"] = "external"
    name: str = Field(..., min_length=1, description="Name of the external defense (e.g. 'wtf-pad')")


DefenseSpec = Annotated[
    Union[ConstantRateSpec, FrontSpec, MergeSpec, ExternalSpec],
    Field(discriminator="variant"),
]

_DEFENSE_ADAPTER = TypeAdapter(DefenseSpec)


def parse_defense_spec(data: dict) -> Union[ConstantRateSpec, FrontSpec, MergeSpec, ExternalSpec]:
    """
    Validate a raw defense block.

    Raises:
        pydantic.ValidationError: On unknown variant or invalid parameters
    """
    return _DEFENSE_ADAPTER.validate_python(data)


# ============================================================================
# Presets
# ============================================================================

DEFENSE_PRESETS: Dict[str, dict] = {
    "front_t1": {"variant": "front", "n_client": 1700, "n_server": 1700, "w_min": 1.0, "w_max": 14.0},
    "front_t2": {"variant": "front", "n_client": 2500, "n_server": 2500, "w_min": 1.0, "w_max": 14.0},
    "tamaraw": {"variant": "constant_rate", "rho_out": 0.04, "rho_in": 0.012, "pad_multiple": 50},
}


def defense_preset(name: str, seed: int = 0):
    """
    Build one of the published defense configurations.

    Raises:
        KeyError: If the preset is unknown
    """
    if name not in DEFENSE_PRESETS:
        raise KeyError(f"Unknown defense preset {name!r}; available: {', '.join(sorted(DEFENSE_PRESETS))}")
    return parse_defense_spec({**DEFENSE_PRESETS[name], "seed": seed})


# ============================================================================
# Overheads
# ============================================================================


@dataclass(frozen=True)
class TraceOverhead:
    """Cost of defending a single trace."""
    real_packets: int
    dummy_packets: int
    latency: float
    original_duration: float
    defended_duration: float


@dataclass(frozen=True)
class OverheadStats:
    """
    Dataset-level defense cost.

    Attributes:
        bandwidth_overhead: Dummy packets per real packet
        latency_overhead: Summed delay of real packets (seconds)
        time_overhead: Mean relative growth of trace duration
        num_traces: Number of defended traces
    """
    bandwidth_overhead: float
    latency_overhead: float
    time_overhead: float
    num_traces: int

    def to_dict(self) -> dict:
        return {
            "bandwidth_overhead": self.bandwidth_overhead,
            "latency_overhead": self.latency_overhead,
            "time_overhead": self.time_overhead,
            "num_traces": self.num_traces,
        }
