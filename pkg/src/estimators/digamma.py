"""
Digamma function.

psi(x) for x > 0: shift x to at least 10 with psi(x) = psi(x + 1) - 1/x, then
apply the asymptotic series

    psi(x) ~ ln x - 1/(2x) - sum_n B_2n / (2n x^2n)

truncated after the x^-10 term (absolute error below 1e-13 for x >= 10).
"""

from typing import Union

import numpy as np

_SHIFT_THRESHOLD = 10.0

# B_2n / (2n) for n = 1..5
_ASYMPTOTIC_COEFFICIENTS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
)


def digamma(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Evaluate the digamma function.

    Args:
        x: Positive scalar or array

    Returns:
        psi(x), a float for scalar input, an array otherwise

    Raises:
        ValueError: If any x <= 0 or is not finite

    Example:
        >>> round(digamma(1.0), 10)
        -0.5772156649
    """
    scalar = np.ndim(x) == 0
    values = np.array(x, dtype=np.float64, ndmin=1)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ValueError("digamma is defined here for finite x > 0 only")

    result = np.zeros_like(values)
    shifted = values.copy()
    while True:
        small = shifted < _SHIFT_THRESHOLD
        if not small.any():
            break
        result[small] -= 1.0 / shifted[small]
        shifted[small] += 1.0

    inv_sq = 1.0 / (shifted * shifted)
    series = np.zeros_like(shifted)
    for coefficient in reversed(_ASYMPTOTIC_COEFFICIENTS):
        series = (series + coefficient) * inv_sq
    result += np.log(shifted) - 0.5 / shifted - series

    if scalar:
        return float(result[0])
    return result.reshape(np.shape(x))
