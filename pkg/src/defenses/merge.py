"""
Merged-trace defense: M page loads overlaid on one connection.

Decoy packets are flagged as dummies from the target's point of view.
"""

from typing import List, Optional, Sequence

import numpy as np

from src.traces.models import Trace


def merge_traces(
    target: Trace,
    decoys: Sequence[Trace],
    rng: Optional[np.random.Generator] = None
) -> Trace:
    """
    Merge a target trace with M-1 decoys by time.

    Args:
        target: Trace whose label the result carries
        decoys: Other sanitized traces
        rng: If given, shuffles constituent order before the stable time
             sort so equal-time ties do not reveal the target

    Returns:
        Trace with |target| + sum(|decoys|) packets, non-decreasing times

    Example:
        >>> merged = merge_traces(a, [b])
        >>> len(merged) == len(a) + len(b)
        True
    """
    if not decoys:
        return target

    constituents: List[Trace] = [target] + [d.with_label(target.label) for d in decoys]
    flags = [target.is_dummy] + [np.ones(len(d), dtype=bool) for d in decoys]

    order = np.arange(len(constituents))
    if rng is not None:
        order = rng.permutation(len(constituents))

    times = np.concatenate([constituents[i].times for i in order])
    directions = np.concatenate([constituents[i].directions for i in order])
    dummies = np.concatenate([flags[i] for i in order])

    sort = np.argsort(times, kind="stable")
    return Trace(times[sort], directions[sort], dummies[sort], target.label)


def merged_theoretical_error(m: int) -> float:
    """
    Minimal error under M-merging of a perfectly classifiable problem: 1 - 1/M.

    Raises:
        ValueError: If m < 1
    """
    if m < 1:
        raise ValueError(f"M must be at least 1, got {m}")
    return 1.0 - 1.0 / m
