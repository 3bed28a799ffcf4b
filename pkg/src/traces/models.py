"""
Data models for packet traces and their fixed-length representations.

Traces are stored column-wise (times, directions, dummy flags) in read-only
numpy arrays; TraceEvent is the row view used at API boundaries. All types
are immutable after construction and safe to share across worker threads.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

# Traces are truncated/padded to this many packets by default
DEFAULT_TRACE_LENGTH = 5000


class Direction(IntEnum):
    """Packet direction as seen from the client."""
    OUTGOING = 1
    INCOMING = -1


class RepresentationKind(str, Enum):
    """Fixed-length trace encodings."""
    DIRECTIONAL = "directional"
    TIMING = "timing"


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TraceEvent:
    """
    A single packet of a trace.

    Attributes:
        time: Seconds since trace start (>= 0)
        direction: +1 outgoing, -1 incoming
        is_dummy: True for defense-injected packets
    """
    time: float
    direction: Direction
    is_dummy: bool = False

    def __post_init__(self):
        if not np.isfinite(self.time) or self.time < 0:
            raise ValueError(f"Event time must be finite and non-negative, got {self.time}")
        object.__setattr__(self, "direction", Direction(int(self.direction)))


@dataclass(frozen=True, eq=False)
class Trace:
    """
    Ordered packet sequence of one page load.

    Parsed traces keep file order; sanitized traces are time-sorted, start at
    time 0 and begin with an outgoing packet.
    """
    times: np.ndarray
    directions: np.ndarray
    is_dummy: np.ndarray
    label: int = 0

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        directions = np.array(self.directions, dtype=np.int8).reshape(-1)
        is_dummy = np.array(self.is_dummy, dtype=bool).reshape(-1)

        if not (len(times) == len(directions) == len(is_dummy)):
            raise ValueError(
                f"Trace columns differ in length: times={len(times)}, "
                f"directions={len(directions)}, is_dummy={len(is_dummy)}"
            )
        if not np.all(np.isfinite(times)) or np.any(times < 0):
            raise ValueError("Trace times must be finite and non-negative")
        if np.any((directions != 1) & (directions != -1)):
            raise ValueError("Trace directions must be +1 or -1")
        if int(self.label) < 0:
            raise ValueError(f"Trace label must be non-negative, got {self.label}")

        object.__setattr__(self, "times", _readonly(times))
        object.__setattr__(self, "directions", _readonly(directions))
        object.__setattr__(self, "is_dummy", _readonly(is_dummy))
        object.__setattr__(self, "label", int(self.label))

    @classmethod
    def from_events(cls, events: Iterable[TraceEvent], label: int = 0) -> "Trace":
        """Build a trace from event objects, keeping their order."""
        events = list(events)
        return cls(
            times=np.array([e.time for e in events], dtype=np.float64),
            directions=np.array([int(e.direction) for e in events], dtype=np.int8),
            is_dummy=np.array([e.is_dummy for e in events], dtype=bool),
            label=label,
        )

    @classmethod
    def from_arrays(
        cls,
        times: Sequence[float],
        directions: Sequence[int],
        label: int = 0,
        is_dummy: Optional[Sequence[bool]] = None
    ) -> "Trace":
        """Build a trace of real (or flagged) packets from parallel sequences."""
        if is_dummy is None:
            is_dummy = np.zeros(len(times), dtype=bool)
        return cls(times=times, directions=directions, is_dummy=is_dummy, label=label)

    @property
    def events(self) -> List[TraceEvent]:
        return [
            TraceEvent(float(t), Direction(int(d)), bool(m))
            for t, d, m in zip(self.times, self.directions, self.is_dummy)
        ]

    @property
    def real_mask(self) -> np.ndarray:
        return ~self.is_dummy

    @property
    def duration(self) -> float:
        if len(self) == 0:
            return 0.0
        return float(self.times[-1] - self.times[0])

    def real_subsequence(self) -> "Trace":
        """Return the trace restricted to non-dummy packets."""
        mask = self.real_mask
        return Trace(self.times[mask], self.directions[mask], self.is_dummy[mask], self.label)

    def with_label(self, label: int) -> "Trace":
        return Trace(self.times, self.directions, self.is_dummy, label)

    def __len__(self) -> int:
        return len(self.times)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.directions, other.directions)
            and np.array_equal(self.is_dummy, other.is_dummy)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class RepVector:
    """
    Fixed-length numeric encoding of a trace.

    Directional values are in {+1, -1, 0}; Timing values carry the packet
    direction as sign and the timestamp as magnitude. Trailing padding is 0.
    """
    kind: RepresentationKind
    values: np.ndarray

    def __post_init__(self):
        kind = RepresentationKind(self.kind)
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if len(values) == 0:
            raise ValueError("RepVector length must be positive")
        if not np.all(np.isfinite(values)):
            raise ValueError("RepVector values must be finite")
        if kind is RepresentationKind.DIRECTIONAL and not np.all(np.isin(values, (-1.0, 0.0, 1.0))):
            raise ValueError("Directional values must be in {+1, -1, 0}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", _readonly(values))

    @property
    def length(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RepVector):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass
class Dataset:
    """
    Labeled collection of sanitized traces with cached representation matrices.

    Attributes:
        traces: Sanitized traces (label in [0, num_classes))
        num_classes: Number of classes C
        class_names: Human-readable class names, index = label
        trace_length: Representation length L
        matrices: Representation kind -> (n, L) array, built on demand
    """
    traces: List[Trace]
    num_classes: int
    class_names: List[str] = field(default_factory=list)
    trace_length: int = DEFAULT_TRACE_LENGTH
    matrices: Dict[RepresentationKind, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.num_classes < 1:
            raise ValueError(f"num_classes must be positive, got {self.num_classes}")
        if self.trace_length < 1:
            raise ValueError(f"trace_length must be positive, got {self.trace_length}")
        for trace in self.traces:
            if trace.label >= self.num_classes:
                raise ValueError(f"Trace label {trace.label} outside [0, {self.num_classes})")
        if not self.class_names:
            self.class_names = [str(c) for c in range(self.num_classes)]

    @property
    def labels(self) -> np.ndarray:
        return np.array([t.label for t in self.traces], dtype=np.int64)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    def representation(self, kind: RepresentationKind) -> np.ndarray:
        """
        Return the (n, L) matrix of RepVector values for a representation kind.

        Args:
            kind: Directional or Timing

        Returns:
            Read-only float64 matrix, one row per trace
        """
        from src.traces.representation import representation_matrix

        kind = RepresentationKind(kind)
        if kind not in self.matrices:
            self.matrices[kind] = _readonly(representation_matrix(self.traces, kind, self.trace_length))
        return self.matrices[kind]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Return a dataset restricted to the given trace indices."""
        indices = list(indices)
        subset = Dataset(
            traces=[self.traces[i] for i in indices],
            num_classes=self.num_classes,
            class_names=list(self.class_names),
            trace_length=self.trace_length,
        )
        for kind, matrix in self.matrices.items():
            subset.matrices[kind] = _readonly(matrix[indices])
        return subset

    def __len__(self) -> int:
        return len(self.traces)
