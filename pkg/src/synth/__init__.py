"""
Synthetic datasets with known Bayes error and mutual information.
"""

from src.synth.generator import generate, make_templates
from src.synth.models import (
    Gaussian1DSpec,
    OracleValue,
    SeparatedClustersSpec,
    SynthData,
    TemplateTracesSpec,
    parse_synth_spec,
)
from src.synth.oracles import oracle_ber, oracle_mi

__all__ = [
    "generate",
    "make_templates",
    "Gaussian1DSpec",
    "OracleValue",
    "SeparatedClustersSpec",
    "SynthData",
    "TemplateTracesSpec",
    "parse_synth_spec",
    "oracle_ber",
    "oracle_mi",
]
