"""
Input validation helpers.

Validators return (is_valid, error_message) tuples so callers decide
whether to raise, warn or skip.
"""

import math
import numbers
from typing import Optional, Tuple

# Slack for error rates computed as float ratios near (C-1)/C
RATE_TOLERANCE = 1e-12


def validate_num_classes(num_classes: int) -> Tuple[bool, Optional[str]]:
    """
    Validate class count for estimators and bounds.

    Args:
        num_classes: Number of classes C

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not isinstance(num_classes, numbers.Integral) or isinstance(num_classes, bool):
        return False, "Number of classes must be an integer"

    if num_classes < 2:
        return False, f"Number of classes must be at least 2, got {num_classes}"

    return True, None


def validate_probability(p: float) -> Tuple[bool, Optional[str]]:
    """
    Validate a probability lies in [0, 1].

    Args:
        p: Probability to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not isinstance(p, numbers.Real) or math.isnan(p):
        return False, "Probability must be a number"

    if p < 0.0 or p > 1.0:
        return False, f"Probability must be between 0.0 and 1.0, got {p}"

    return True, None


def validate_error_rate(rate: float, num_classes: int) -> Tuple[bool, Optional[str]]:
    """
    Validate a Bayes error rate lies in [0, (C-1)/C].

    Args:
        rate: Error rate R
        num_classes: Number of classes C

    Returns:
        Tuple of (is_valid, error_message)
    """
    ok, message = validate_num_classes(num_classes)
    if not ok:
        return ok, message

    ok, message = validate_probability(rate)
    if not ok:
        return ok, message

    upper = (num_classes - 1) / num_classes
    if rate > upper + RATE_TOLERANCE:
        return False, f"Error rate {rate} exceeds the maximum {upper:.6f} for C={num_classes}"

    return True, None


def validate_seed(seed: int) -> Tuple[bool, Optional[str]]:
    """
    Validate an RNG seed is a non-negative 64-bit integer.

    Args:
        seed: Seed to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not isinstance(seed, numbers.Integral) or isinstance(seed, bool):
        return False, "Seed must be an integer"

    if seed < 0 or seed >= 2 ** 64:
        return False, "Seed must be in [0, 2^64)"

    return True, None
