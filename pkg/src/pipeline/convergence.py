"""
Convergence study: repeat the estimation on growing traces-per-class subsets.

Subsets are nested (each size is a prefix of one seeded per-class
permutation), so differences between sizes come from the added traces
rather than from a fresh draw.
"""

import csv
import logging
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np

from src.pipeline.models import ConvergencePoint, RunConfig
from src.pipeline.runner import defend_dataset, estimate_dataset, load_run_dataset
from src.traces.models import Dataset
from src.utils.errors import ConfigError
from src.utils.hashing import derive_seed, make_rng

logger = logging.getLogger(__name__)


def nested_subsets(dataset: Dataset, sizes: Sequence[int], seed: int) -> List[np.ndarray]:
    """
    Row indices of the per-class prefixes of a seeded permutation.

    Raises:
        ConfigError: If a size is below 1 or above the smallest class
    """
    smallest = int(dataset.class_counts().min())
    bad = [s for s in sizes if not 1 <= s <= smallest]
    if bad:
        raise ConfigError(f"Subsample sizes must be within [1, {smallest}], got {bad}")

    labels = dataset.labels
    orders = []
    for cls in range(dataset.num_classes):
        members = np.flatnonzero(labels == cls)
        rng = make_rng(derive_seed(seed, "convergence", cls))
        orders.append(members[rng.permutation(len(members))])

    return [np.sort(np.concatenate([order[:size] for order in orders])) for size in sizes]


def run_convergence(cfg: RunConfig, sizes: Sequence[int]) -> List[ConvergencePoint]:
    """
    Estimate BER and MI at each traces-per-class size.

    The dataset is loaded and defended once; each size then runs the
    configured folds on its subset.

    Args:
        cfg: Run configuration (its output path is ignored)
        sizes: Traces per class, each at least 2 * cfg.num_folds

    Returns:
        One ConvergencePoint per size, in ascending size order

    Raises:
        ConfigError: If a size is invalid
        SplitError: If a size is too small for cfg.num_folds
    """
    sizes = sorted(set(int(s) for s in sizes))
    if not sizes:
        raise ConfigError("At least one subsample size is required")

    dataset, rejected = load_run_dataset(cfg)
    dataset, overhead = defend_dataset(dataset, cfg)

    points = []
    for size, rows in zip(sizes, nested_subsets(dataset, sizes, cfg.seed)):
        logger.info(f"Convergence step: {size} traces per class ({len(rows)} traces)")
        report = estimate_dataset(dataset.subset(rows), cfg, overhead, rejected)
        points.append(ConvergencePoint(
            traces_per_class=size,
            num_traces=len(rows),
            aggregate_ber=report.aggregate_ber,
            aggregate_mi=report.aggregate_mi,
            successful_folds=len(report.successful_folds),
        ))
    return points


def write_convergence_csv(points: Sequence[ConvergencePoint], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["traces_per_class", "num_traces", "ber_mean", "ber_std", "mi_mean", "mi_std", "successful_folds"])
        for point in points:
            ber, mi = point.aggregate_ber, point.aggregate_mi
            writer.writerow([
                point.traces_per_class,
                point.num_traces,
                "" if ber is None else repr(ber.mean),
                "" if ber is None or ber.std is None else repr(ber.std),
                "" if mi is None else repr(mi.mean),
                "" if mi is None or mi.std is None else repr(mi.std),
                point.successful_folds,
            ])
    return path
