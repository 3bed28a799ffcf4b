"""
Constant-rate padding (simplified Tamaraw).

Each direction is sent on a fixed clock: outgoing packets at multiples of
rho_out, incoming at multiples of rho_in. A packet leaves at the first free
slot of its direction at or after its original time, empty slots before it
are filled with dummies, and the stream is padded with trailing dummies until
its length is a multiple of pad_multiple.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from src.defenses.models import ConstantRateSpec
from src.traces.models import Direction, Trace

logger = logging.getLogger(__name__)

# Guards ceil() against float noise when a packet sits exactly on a slot
_SLOT_EPSILON = 1e-9


def schedule_direction(
    times: np.ndarray,
    rho: float,
    pad_multiple: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Assign one direction's packets to constant-rate slots.

    Args:
        times: Original times of the packets, in trace order
        rho: Slot interval in seconds
        pad_multiple: Final slot count is a positive multiple of this

    Returns:
        (slot_indices_of_packets, dummy_slot_indices)

    Example:
        >>> schedule_direction(np.array([0.0, 0.1]), 0.04, 1)
        (array([0, 3]), array([1, 2]))
    """
    packet_slots = np.empty(len(times), dtype=np.int64)
    next_free = 0
    for i, t in enumerate(times):
        slot = max(next_free, math.ceil(t / rho - _SLOT_EPSILON))
        packet_slots[i] = slot
        next_free = slot + 1

    total = max(pad_multiple, -(-next_free // pad_multiple) * pad_multiple)
    is_used = np.zeros(total, dtype=bool)
    is_used[packet_slots] = True
    return packet_slots, np.flatnonzero(~is_used)


def apply_constant_rate(
    trace: Trace,
    spec: ConstantRateSpec,
    rng: Optional[np.random.Generator] = None
) -> Trace:
    """
    Defend a sanitized trace with constant-rate padding.

    The schedule is deterministic; `rng` is accepted for interface
    uniformity with the randomized defenses and is not consumed.

    Args:
        trace: Sanitized trace
        spec: Slot intervals and padding multiple
        rng: Unused

    Returns:
        Defended trace, time-sorted with outgoing packets first on equal times
    """
    times, directions, dummies = [], [], []

    for direction, rho in ((Direction.OUTGOING, spec.rho_out), (Direction.INCOMING, spec.rho_in)):
        mask = trace.directions == direction
        packet_slots, dummy_slots = schedule_direction(trace.times[mask], rho, spec.pad_multiple)

        times.append(packet_slots * rho)
        dummies.append(trace.is_dummy[mask])
        times.append(dummy_slots * rho)
        dummies.append(np.ones(len(dummy_slots), dtype=bool))
        directions.append(np.full(len(packet_slots) + len(dummy_slots), int(direction), dtype=np.int8))

    times = np.concatenate(times)
    directions = np.concatenate(directions)
    dummies = np.concatenate(dummies)

    order = np.lexsort((-directions, times))
    return Trace(times[order], directions[order], dummies[order], trace.label)
