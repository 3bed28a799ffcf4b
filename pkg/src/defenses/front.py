"""
FRONT zero-delay padding.

Per side a dummy count n ~ UniformInt[1, N] and a Rayleigh scale
w ~ Uniform[W_min, W_max] are drawn once; dummy times are Rayleigh(w)
samples. Dummies scheduled after the last real packet are dropped.
"""

import logging

import numpy as np

from src.defenses.models import FrontSpec
from src.traces.models import Direction, Trace

logger = logging.getLogger(__name__)


def rayleigh_inverse_cdf(u: np.ndarray, scale: float) -> np.ndarray:
    """Map u ~ Uniform[0, 1) to Rayleigh(scale) samples."""
    return scale * np.sqrt(-2.0 * np.log1p(-u))


def sample_front_timestamps(
    max_packets: int,
    w_min: float,
    w_max: float,
    rng: np.random.Generator
) -> np.ndarray:
    """
    Draw one side's dummy schedule.

    Args:
        max_packets: Upper bound N of the dummy count
        w_min: Lower bound of the Rayleigh scale window
        w_max: Upper bound of the Rayleigh scale window
        rng: Seeded generator

    Returns:
        Unsorted dummy timestamps (between 1 and max_packets of them)
    """
    n_packets = int(rng.integers(1, max_packets, endpoint=True))
    scale = w_min + (w_max - w_min) * rng.random()
    logger.debug(f"FRONT side: {n_packets} dummies, rayleigh scale {scale:.3f}")
    return rayleigh_inverse_cdf(rng.random(n_packets), scale)


def apply_front(trace: Trace, spec: FrontSpec, rng: np.random.Generator) -> Trace:
    """
    Defend a sanitized trace with FRONT padding.

    Real packets keep their times and order; on equal times real packets
    precede dummies.

    Args:
        trace: Sanitized trace
        spec: Dummy budgets and Rayleigh window
        rng: Generator seeded for this trace

    Returns:
        Defended trace (deterministic given the generator state)
    """
    out_times = sample_front_timestamps(spec.n_client, spec.w_min, spec.w_max, rng)
    in_times = sample_front_timestamps(spec.n_server, spec.w_min, spec.w_max, rng)

    end = trace.times.max() if len(trace) else 0.0
    out_times = out_times[out_times <= end]
    in_times = in_times[in_times <= end]

    times = np.concatenate([trace.times, out_times, in_times])
    directions = np.concatenate([
        trace.directions,
        np.full(len(out_times), int(Direction.OUTGOING), dtype=np.int8),
        np.full(len(in_times), int(Direction.INCOMING), dtype=np.int8),
    ])
    dummies = np.concatenate([trace.is_dummy, np.ones(len(out_times) + len(in_times), dtype=bool)])

    order = np.argsort(times, kind="stable")
    return Trace(times[order], directions[order], dummies[order], trace.label)
