"""
Defense simulators: constant-rate padding, FRONT, merged traces.
"""

from src.defenses.apply import DefendedTraces, apply_defense_to_dataset, defend_trace
from src.defenses.constant_rate import apply_constant_rate
from src.defenses.front import apply_front
from src.defenses.merge import merge_traces, merged_theoretical_error
from src.defenses.models import (
    ConstantRateSpec,
    DEFENSE_PRESETS,
    ExternalSpec,
    FrontSpec,
    MergeSpec,
    OverheadStats,
    defense_preset,
    parse_defense_spec,
)

__all__ = [
    "DefendedTraces",
    "apply_defense_to_dataset",
    "defend_trace",
    "apply_constant_rate",
    "apply_front",
    "merge_traces",
    "merged_theoretical_error",
    "ConstantRateSpec",
    "DEFENSE_PRESETS",
    "ExternalSpec",
    "FrontSpec",
    "MergeSpec",
    "OverheadStats",
    "defense_preset",
    "parse_defense_spec",
]
