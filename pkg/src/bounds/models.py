"""
Result models for information-theoretic bounds.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np
from pydantic import BaseModel, Field


class ConsistencyStatus(str, Enum):
    CONSISTENT = "consistent"
    MI_BELOW_FANO = "mi_below_fano"
    MI_ABOVE_KOVALEVSKIJ = "mi_above_kovalevskij"


class ConsistencyResult(BaseModel):
    """
    Position of an (BER, MI) estimate pair relative to the feasible region.

    Attributes:
        status: Classification of the pair
        gap_bits: Distance to the violated bound (0 when consistent)
        fano_bits: Fano lower bound at the BER
        kovalevskij_bits: Kovalevskij upper bound at the BER
    """
    status: ConsistencyStatus
    gap_bits: float = Field(default=0.0, ge=0.0)
    ber: float = Field(..., ge=0.0, le=1.0)
    mi_bits: float = Field(..., ge=0.0)
    fano_bits: float = Field(..., ge=0.0)
    kovalevskij_bits: float = Field(..., ge=0.0)

    @property
    def is_consistent(self) -> bool:
        return self.status is ConsistencyStatus.CONSISTENT


@dataclass(frozen=True)
class BoundRegion:
    """
    Fano and Kovalevskij bounds sampled over R in [0, (C-1)/C].

    Attributes:
        num_classes: Number of classes C
        error_rates: Grid of Bayes error values
        fano_bits: Lower bound of the MI at each grid point
        kovalevskij_bits: Upper bound of the MI at each grid point
    """
    num_classes: int
    error_rates: np.ndarray
    fano_bits: np.ndarray
    kovalevskij_bits: np.ndarray

    def rows(self) -> List[tuple]:
        return list(zip(self.error_rates.tolist(), self.fano_bits.tolist(), self.kovalevskij_bits.tolist()))


@dataclass(frozen=True)
class MergedBoundRow:
    """Theoretical error of M-merging and the MI interval it admits."""
    m: int
    theoretical_error: float
    fano_bits: float
    kovalevskij_bits: float
