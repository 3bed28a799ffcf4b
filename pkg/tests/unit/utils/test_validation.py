"""
Unit Tests for Validation Helpers

Tests class count, probability, error rate and seed validation.
"""

import pytest
from src.utils.validation import (
    validate_error_rate,
    validate_num_classes,
    validate_probability,
    validate_seed,
)


@pytest.mark.unit
def test_validate_num_classes_valid():
    """Test validation of a valid class count."""
    is_valid, error = validate_num_classes(100)

    assert is_valid is True
    assert error is None


@pytest.mark.unit
def test_validate_num_classes_too_small():
    """Test validation rejects fewer than two classes."""
    is_valid, error = validate_num_classes(1)

    assert is_valid is False
    assert "at least 2" in error


@pytest.mark.unit
def test_validate_num_classes_not_integer():
    """Test validation rejects non-integers and booleans."""
    assert validate_num_classes(2.5)[0] is False
    assert validate_num_classes(True)[0] is False


@pytest.mark.unit
def test_validate_probability_bounds():
    """Test validation accepts the closed unit interval."""
    assert validate_probability(0.0) == (True, None)
    assert validate_probability(1.0) == (True, None)
    assert validate_probability(1.01)[0] is False
    assert validate_probability(-0.01)[0] is False


@pytest.mark.unit
def test_validate_probability_nan():
    """Test validation rejects NaN and strings."""
    assert validate_probability(float("nan"))[0] is False
    assert validate_probability("0.5")[0] is False


@pytest.mark.unit
def test_validate_error_rate_chance_level():
    """Test that R = (C-1)/C is accepted and anything above is not."""
    assert validate_error_rate(0.75, 4) == (True, None)

    is_valid, error = validate_error_rate(0.76, 4)

    assert is_valid is False
    assert "exceeds the maximum" in error


@pytest.mark.unit
def test_validate_error_rate_float_slack():
    """Test that 1 - 1/3 computed in floats is accepted for C=3."""
    assert validate_error_rate(1.0 - 1.0 / 3.0, 3)[0] is True


@pytest.mark.unit
def test_validate_seed():
    """Test seed range checks."""
    assert validate_seed(0) == (True, None)
    assert validate_seed(2 ** 64 - 1) == (True, None)
    assert validate_seed(2 ** 64)[0] is False
    assert validate_seed(-1)[0] is False
    assert validate_seed("7")[0] is False
