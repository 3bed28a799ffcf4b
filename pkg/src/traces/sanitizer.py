"""
Trace sanitization.

Parsed traces are sorted by time (stable for ties), re-based so the first
packet is at time 0, and rejected when empty or when the first packet is
incoming.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from src.traces.models import Dataset, DEFAULT_TRACE_LENGTH, Direction, Trace
from src.utils.errors import DatasetError
from src.utils.logging import log_dataset_loaded

logger = logging.getLogger(__name__)


class RejectionReason(str, Enum):
    """Why a trace was dropped during sanitization."""
    EMPTY_TRACE = "empty_trace"
    INCOMING_FIRST = "incoming_first"


@dataclass(frozen=True)
class SanitizeRejection:
    """Result of sanitize() for a trace that cannot be used."""
    reason: RejectionReason
    label: int = 0


@dataclass
class SanitizeSummary:
    """Accepted traces plus rejection counts per reason."""
    accepted: List[Trace]
    rejected: Dict[RejectionReason, int] = field(default_factory=dict)

    @property
    def num_rejected(self) -> int:
        return sum(self.rejected.values())


def sanitize(trace: Trace) -> Union[Trace, SanitizeRejection]:
    """
    Sort, re-base and filter one parsed trace.

    Args:
        trace: Parsed trace in file order

    Returns:
        Sanitized Trace, or SanitizeRejection with the reason

    Example:
        >>> t = Trace.from_arrays([0.2, 0.0], [-1, 1])
        >>> sanitize(t).directions.tolist()
        [1, -1]
    """
    if len(trace) == 0:
        return SanitizeRejection(RejectionReason.EMPTY_TRACE, trace.label)

    order = np.argsort(trace.times, kind="stable")
    times = trace.times[order]
    directions = trace.directions[order]

    if directions[0] != Direction.OUTGOING:
        return SanitizeRejection(RejectionReason.INCOMING_FIRST, trace.label)

    return Trace(
        times=times - times[0],
        directions=directions,
        is_dummy=trace.is_dummy[order],
        label=trace.label,
    )


def sanitize_all(traces: Sequence[Trace]) -> SanitizeSummary:
    """Sanitize a batch of traces, keeping order of the accepted ones."""
    accepted = []
    reasons: Counter = Counter()
    for trace in traces:
        result = sanitize(trace)
        if isinstance(result, SanitizeRejection):
            reasons[result.reason] += 1
        else:
            accepted.append(result)

    if reasons:
        logger.info(
            f"Sanitization rejected {sum(reasons.values())} of {len(traces)} traces: "
            + ", ".join(f"{r.value}={n}" for r, n in sorted(reasons.items(), key=lambda x: x[0].value))
        )
    return SanitizeSummary(accepted=accepted, rejected=dict(reasons))


def build_dataset(
    traces: Sequence[Trace],
    class_names: Sequence[str],
    trace_length: int = DEFAULT_TRACE_LENGTH,
    source: str = "<memory>"
) -> Tuple[Dataset, SanitizeSummary]:
    """
    Sanitize raw traces and assemble a Dataset.

    Args:
        traces: Parsed traces (labels index class_names)
        class_names: One name per class
        trace_length: Representation length L
        source: Dataset origin, used for logging

    Returns:
        (Dataset of accepted traces, sanitization summary)

    Raises:
        DatasetError: If no trace survives or a class has fewer than 2 traces
    """
    summary = sanitize_all(traces)
    if not summary.accepted:
        raise DatasetError(f"No usable traces in {source}")

    dataset = Dataset(
        traces=summary.accepted,
        num_classes=len(class_names),
        class_names=list(class_names),
        trace_length=trace_length,
    )

    counts = dataset.class_counts()
    for label, count in enumerate(counts):
        if count < 2:
            raise DatasetError(
                f"Class {dataset.class_names[label]!r} has {count} usable traces, need at least 2"
            )

    log_dataset_loaded(source, len(dataset), dataset.num_classes, summary.num_rejected)
    return dataset, summary
