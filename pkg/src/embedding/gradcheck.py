"""
Finite-difference check of the hand-written backward passes.
"""

import copy
import logging
from dataclasses import dataclass

import numpy as np

from src.embedding.network import EmbeddingNetwork
from src.utils.hashing import make_rng

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
DEFAULT_NUM_PARAMETERS = 200
DEFAULT_TOLERANCE = 1e-4


@dataclass(frozen=True)
class GradientCheckResult:
    max_relative_error: float
    num_checked: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)


def gradient_check(
    network: EmbeddingNetwork,
    inputs: np.ndarray,
    labels: np.ndarray,
    num_parameters: int = DEFAULT_NUM_PARAMETERS,
    step: float = DEFAULT_STEP,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE
) -> GradientCheckResult:
    """
    Compare analytic gradients with central finite differences.

    Works on a float64 deep copy; the given network is not modified.

    Args:
        network: Network to check (small variant, batch of at most 8)
        inputs: (B, L) batch
        labels: (B,) labels
        num_parameters: Parameters to sample (all of them if fewer exist)
        step: Finite-difference step h
        seed: Seed for the parameter sample
        tolerance: Pass threshold on the max relative error

    Returns:
        GradientCheckResult with the max relative discrepancy
    """
    scratch = copy.deepcopy(network)
    inputs = np.asarray(inputs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)

    _, analytic = scratch.gradients(inputs, labels)
    analytic = [np.array(g, dtype=np.float64) for g in analytic]
    params = [p for _, p in scratch.parameters()]

    sizes = np.array([p.size for p in params])
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    total = int(offsets[-1])
    rng = make_rng(seed)
    flat_indices = np.sort(rng.choice(total, size=min(num_parameters, total), replace=False))

    worst = 0.0
    for flat in flat_indices:
        tensor = int(np.searchsorted(offsets, flat, side="right") - 1)
        index = np.unravel_index(int(flat - offsets[tensor]), params[tensor].shape)
        param = params[tensor]

        original = param[index]
        param[index] = original + step
        loss_plus = scratch.loss(inputs, labels)
        param[index] = original - step
        loss_minus = scratch.loss(inputs, labels)
        param[index] = original

        numeric = (loss_plus - loss_minus) / (2 * step)
        worst = max(worst, relative_error(float(analytic[tensor][index]), numeric))

    logger.debug(f"Gradient check over {len(flat_indices)} parameters: max relative error {worst:.3e}")
    return GradientCheckResult(max_relative_error=worst, num_checked=len(flat_indices), tolerance=tolerance)
