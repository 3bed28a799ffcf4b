"""
Hand-crafted summary-statistic features.

The vector has MANUAL_FEATURE_DIM entries in the order of
MANUAL_FEATURE_NAMES:

- packet counts: total, outgoing, incoming, outgoing fraction, duration
- inter-packet times (overall, outgoing, incoming): mean, std, p25, p50, p75, p90
- bursts per direction: count, mean size, max size, mean duration

Percentiles interpolate linearly between order statistics. Statistics of
empty samples are 0, and single-packet traces have all timing and burst
statistics set to 0.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np

from src.features.bursts import burst_segments
from src.traces.models import Direction, Trace

logger = logging.getLogger(__name__)

_PERCENTILES = (25, 50, 75, 90)
_IPT_STATS = ("mean", "std", "p25", "p50", "p75", "p90")

MANUAL_FEATURE_NAMES: List[str] = (
    ["total_packets", "outgoing_packets", "incoming_packets", "outgoing_fraction", "duration"]
    + [f"ipt_{scope}_{stat}" for scope in ("all", "out", "in") for stat in _IPT_STATS]
    + ["burst_count_out", "burst_count_in"]
    + ["burst_mean_size_out", "burst_max_size_out", "burst_mean_size_in", "burst_max_size_in"]
    + ["burst_mean_duration_out", "burst_mean_duration_in"]
)

MANUAL_FEATURE_DIM = len(MANUAL_FEATURE_NAMES)


def _ipt_statistics(times: np.ndarray) -> List[float]:
    gaps = np.diff(times)
    if len(gaps) == 0:
        return [0.0] * len(_IPT_STATS)
    return [float(np.mean(gaps)), float(np.std(gaps))] + [
        float(p) for p in np.percentile(gaps, _PERCENTILES, method="linear")
    ]


def manual_features(trace: Trace) -> np.ndarray:
    """
    Compute the manual feature vector of a sanitized trace.

    Args:
        trace: Sanitized trace

    Returns:
        float64 vector of length MANUAL_FEATURE_DIM

    Example:
        >>> f = manual_features(Trace.from_arrays([0.0, 0.1, 0.3], [1, -1, 1]))
        >>> f[:5].tolist()
        [3.0, 2.0, 1.0, 0.6666666666666666, 0.3]
    """
    features = np.zeros(MANUAL_FEATURE_DIM, dtype=np.float64)
    total = len(trace)
    if total == 0:
        return features

    outgoing = trace.directions == Direction.OUTGOING
    n_out = int(outgoing.sum())
    features[0:5] = [total, n_out, total - n_out, n_out / total, trace.duration]
    if total == 1:
        return features

    offset = 5
    for times in (trace.times, trace.times[outgoing], trace.times[~outgoing]):
        features[offset:offset + len(_IPT_STATS)] = _ipt_statistics(times)
        offset += len(_IPT_STATS)

    bursts = burst_segments(trace)
    per_direction = {}
    for direction in (Direction.OUTGOING, Direction.INCOMING):
        selected = [b for b in bursts if b.direction == direction]
        sizes = np.array([b.length for b in selected], dtype=np.float64)
        durations = np.array([b.duration for b in selected], dtype=np.float64)
        per_direction[direction] = (
            len(selected),
            float(sizes.mean()) if len(sizes) else 0.0,
            float(sizes.max()) if len(sizes) else 0.0,
            float(durations.mean()) if len(durations) else 0.0,
        )

    out_stats, in_stats = per_direction[Direction.OUTGOING], per_direction[Direction.INCOMING]
    features[offset:] = [
        out_stats[0], in_stats[0],
        out_stats[1], out_stats[2], in_stats[1], in_stats[2],
        out_stats[3], in_stats[3],
    ]
    return features


def manual_feature_matrix(traces: Sequence[Trace]) -> np.ndarray:
    """Stack manual feature vectors into an (n, MANUAL_FEATURE_DIM) matrix."""
    if not traces:
        return np.zeros((0, MANUAL_FEATURE_DIM), dtype=np.float64)
    return np.vstack([manual_features(t) for t in traces])


@dataclass(frozen=True)
class Standardizer:
    """Per-column z-score transform fitted on one split."""
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, matrix: np.ndarray) -> "Standardizer":
        """Fit on training rows; constant columns get unit scale."""
        mean = matrix.mean(axis=0)
        scale = matrix.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        return cls(mean=mean, scale=scale)

    def transform(self, matrix: np.ndarray) -> np.ndarray:
        return (matrix - self.mean) / self.scale


def export_manual_features_csv(traces: Sequence[Trace], path: Union[str, Path]) -> Path:
    """
    Write manual features as CSV: header of feature names, one row per
    trace, final column the label.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix = manual_feature_matrix(traces)

    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MANUAL_FEATURE_NAMES + ["label"])
        for row, trace in zip(matrix, traces):
            writer.writerow([repr(float(v)) for v in row] + [trace.label])

    logger.info(f"Wrote manual features of {len(traces)} traces to {path}")
    return path
