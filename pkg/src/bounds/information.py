"""
Fano and Kovalevskij bounds between the Bayes error R and the mutual
information I(W; X) for C equally likely classes (H(W) = log2 C).

    Fano:         I >= log2 C - H(R) - R log2(C - 1)
    Kovalevskij:  I <= min_{k=2..C} [log2 C - log2 k
                                     - k (k+1) log2((k+1)/k) (R - (k-1)/k)]

Both are clamped to [0, log2 C].
"""

import csv
import logging
import math
from pathlib import Path
from typing import List, Union

import numpy as np
from scipy.special import xlogy

from src.bounds.models import BoundRegion, ConsistencyResult, ConsistencyStatus, MergedBoundRow
from src.defenses.merge import merged_theoretical_error
from src.utils.validation import RATE_TOLERANCE, validate_error_rate, validate_num_classes, validate_probability

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 400

# Estimates closer than this to a bound count as on it
CONSISTENCY_TOLERANCE = 1e-9


def _check_rate(error_rate: float, num_classes: int) -> float:
    ok, message = validate_error_rate(error_rate, num_classes)
    if not ok:
        raise ValueError(message)
    return min(float(error_rate), (num_classes - 1) / num_classes)


def binary_entropy(p: float) -> float:
    """
    Binary entropy in bits, with 0 log 0 = 0.

    Example:
        >>> binary_entropy(0.5)
        1.0
    """
    ok, message = validate_probability(p)
    if not ok:
        raise ValueError(message)
    return float(-(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / math.log(2.0))


def fano_lower(error_rate: float, num_classes: int) -> float:
    """
    Fano lower bound of the MI in bits.

    Args:
        error_rate: Bayes error R in [0, (C-1)/C]
        num_classes: Number of classes C >= 2

    Returns:
        max(0, log2 C - H(R) - R log2(C-1))

    Raises:
        ValueError: If R or C is out of range
    """
    rate = _check_rate(error_rate, num_classes)
    value = math.log2(num_classes) - binary_entropy(rate) - rate * math.log2(num_classes - 1)
    return max(0.0, value)


def kovalevskij_upper(error_rate: float, num_classes: int) -> float:
    """
    Kovalevskij upper bound of the MI in bits.

    The minimum over k in [2, C] is taken before clamping to [0, log2 C].

    Raises:
        ValueError: If R or C is out of range

    Example:
        >>> kovalevskij_upper(0.5, 2)
        0.0
    """
    rate = _check_rate(error_rate, num_classes)
    k = np.arange(2, num_classes + 1, dtype=np.float64)
    terms = (
        math.log2(num_classes)
        - np.log2(k)
        - k * (k + 1) * np.log2((k + 1) / k) * (rate - (k - 1) / k)
    )
    return float(min(max(terms.min(), 0.0), math.log2(num_classes)))


def bound_region(num_classes: int, points: int = DEFAULT_GRID_POINTS) -> BoundRegion:
    """
    Sample both bounds on an evenly spaced grid over [0, (C-1)/C].

    Raises:
        ValueError: If C < 2 or fewer than 2 grid points
    """
    ok, message = validate_num_classes(num_classes)
    if not ok:
        raise ValueError(message)
    if points < 2:
        raise ValueError(f"Grid needs at least 2 points, got {points}")

    rates = np.linspace(0.0, (num_classes - 1) / num_classes, points)
    fano = np.array([fano_lower(r, num_classes) for r in rates])
    kovalevskij = np.array([kovalevskij_upper(r, num_classes) for r in rates])
    return BoundRegion(num_classes, rates, fano, kovalevskij)


def write_bound_region_csv(region: BoundRegion, path: Union[str, Path]) -> Path:
    """Write the grid with columns R, fano_bits, kovalevskij_bits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["R", "fano_bits", "kovalevskij_bits"])
        for rate, fano, kovalevskij in region.rows():
            writer.writerow([repr(rate), repr(fano), repr(kovalevskij)])
    return path


def check_consistency(ber: float, mi_bits: float, num_classes: int) -> ConsistencyResult:
    """
    Classify an estimate pair against the Fano/Kovalevskij region.

    Args:
        ber: Aggregate BER estimate
        mi_bits: Aggregate MI estimate in bits
        num_classes: Number of classes C

    Returns:
        ConsistencyResult with the gap to the violated bound, if any

    Example:
        >>> check_consistency(0.5, 0.9, 2).status.value
        'mi_above_kovalevskij'
    """
    rate = min(max(float(ber), 0.0), (num_classes - 1) / num_classes + RATE_TOLERANCE)
    lower = fano_lower(rate, num_classes)
    upper = kovalevskij_upper(rate, num_classes)

    status, gap = ConsistencyStatus.CONSISTENT, 0.0
    if mi_bits < lower - CONSISTENCY_TOLERANCE:
        status, gap = ConsistencyStatus.MI_BELOW_FANO, lower - mi_bits
    elif mi_bits > upper + CONSISTENCY_TOLERANCE:
        status, gap = ConsistencyStatus.MI_ABOVE_KOVALEVSKIJ, mi_bits - upper

    return ConsistencyResult(
        status=status,
        gap_bits=gap,
        ber=min(rate, 1.0),
        mi_bits=mi_bits,
        fano_bits=lower,
        kovalevskij_bits=upper,
    )


def merged_bounds_table(max_m: int, num_classes: int) -> List[MergedBoundRow]:
    """
    Theoretical merged-trace error 1 - 1/M and the MI interval at that
    error, for M = 1..max_m.

    Raises:
        ValueError: If max_m < 1, C < 2, or 1 - 1/M exceeds (C-1)/C for some M
    """
    if max_m < 1:
        raise ValueError(f"max_m must be at least 1, got {max_m}")
    if max_m > num_classes:
        raise ValueError(f"M={max_m} exceeds the number of classes {num_classes}")

    rows = []
    for m in range(1, max_m + 1):
        error = merged_theoretical_error(m)
        rows.append(MergedBoundRow(
            m=m,
            theoretical_error=error,
            fano_bits=fano_lower(error, num_classes),
            kovalevskij_bits=kovalevskij_upper(error, num_classes),
        ))
    return rows
