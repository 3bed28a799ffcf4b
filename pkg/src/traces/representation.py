"""
Fixed-length trace encodings.

Directional: sign of each packet, zero-padded.
Timing: direction * timestamp per packet, zero-padded. The first packet of
a sanitized trace is outgoing at time 0 and encodes as +0. Any other packet
at time 0 also encodes as +0, so Timing drops its direction: constant-rate
slot 0 in both directions and merged decoys starting at 0 are such packets.
Directional keeps those signs.
"""

from typing import Sequence

import numpy as np

from src.traces.models import RepresentationKind, RepVector, Trace


def _encode_into(row: np.ndarray, trace: Trace, kind: RepresentationKind) -> None:
    n = min(len(trace), len(row))
    directions = trace.directions[:n].astype(np.float64)
    if kind is RepresentationKind.DIRECTIONAL:
        row[:n] = directions
    else:
        row[:n] = directions * trace.times[:n]
        # -0.0 never appears in a valid encoding
        row[:n] += 0.0


def to_representation(trace: Trace, kind: RepresentationKind, length: int) -> RepVector:
    """
    Encode a sanitized trace as a fixed-length vector.

    Args:
        trace: Sanitized trace
        kind: Directional or Timing
        length: Output length L (first min(|trace|, L) packets are encoded)

    Returns:
        RepVector of exactly `length` values

    Raises:
        ValueError: If length < 1

    Example:
        >>> t = Trace.from_arrays([0.0, 0.1, 0.3], [1, -1, 1])
        >>> to_representation(t, RepresentationKind.DIRECTIONAL, 5).values.tolist()
        [1.0, -1.0, 1.0, 0.0, 0.0]
    """
    if length < 1:
        raise ValueError(f"Representation length must be positive, got {length}")

    kind = RepresentationKind(kind)
    row = np.zeros(length, dtype=np.float64)
    _encode_into(row, trace, kind)
    return RepVector(kind=kind, values=row)


def representation_matrix(traces: Sequence[Trace], kind: RepresentationKind, length: int) -> np.ndarray:
    """Encode many traces into an (n, length) float64 matrix."""
    if length < 1:
        raise ValueError(f"Representation length must be positive, got {length}")

    kind = RepresentationKind(kind)
    matrix = np.zeros((len(traces), length), dtype=np.float64)
    for i, trace in enumerate(traces):
        _encode_into(matrix[i], trace, kind)
    return matrix


def timing_to_trace(vector: RepVector, num_packets: int, label: int = 0) -> Trace:
    """
    Decode the first `num_packets` entries of a Timing vector.

    Zero values decode as outgoing, so the round trip is exact only when the
    first packet is the only one at time 0.

    Raises:
        ValueError: If the vector is not a Timing vector or is too short
    """
    if vector.kind is not RepresentationKind.TIMING:
        raise ValueError(f"Expected a timing vector, got {vector.kind.value}")
    if num_packets < 1 or num_packets > vector.length:
        raise ValueError(f"num_packets must be in [1, {vector.length}], got {num_packets}")

    values = vector.values[:num_packets]
    directions = np.where(values < 0, -1, 1).astype(np.int8)
    return Trace.from_arrays(np.abs(values), directions, label=label)
