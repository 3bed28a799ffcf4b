"""
Burst segmentation: maximal runs of same-direction packets.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from src.traces.models import Direction, Trace


@dataclass(frozen=True)
class Burst:
    """One maximal run of equal-direction packets."""
    direction: Direction
    start: int
    length: int
    duration: float


def burst_boundaries(directions: np.ndarray) -> np.ndarray:
    """Return start indices of every burst (first entry is 0)."""
    if len(directions) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(([0], np.flatnonzero(np.diff(directions) != 0) + 1))


def burst_segments(trace: Trace) -> List[Burst]:
    """
    Split a trace into bursts.

    Args:
        trace: Sanitized trace

    Returns:
        Bursts in trace order; their lengths sum to len(trace)

    Example:
        >>> t = Trace.from_arrays([0, 1, 2, 3], [1, 1, -1, 1])
        >>> [(b.direction, b.start, b.length) for b in burst_segments(t)]
        [(<Direction.OUTGOING: 1>, 0, 2), (<Direction.INCOMING: -1>, 2, 1), (<Direction.OUTGOING: 1>, 3, 1)]
    """
    starts = burst_boundaries(trace.directions)
    ends = np.append(starts[1:], len(trace))
    return [
        Burst(
            direction=Direction(int(trace.directions[s])),
            start=int(s),
            length=int(e - s),
            duration=float(trace.times[e - 1] - trace.times[s]),
        )
        for s, e in zip(starts, ends)
    ]
