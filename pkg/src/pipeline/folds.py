"""
Stratified cross-validation folds with E1/E2 evaluation halves.
"""

import logging
from typing import Dict, Optional, Sequence

import numpy as np

from src.pipeline.models import Fold, SplitPlan
from src.utils.errors import LeakageError, SplitError
from src.utils.hashing import derive_seed, make_rng

logger = logging.getLogger(__name__)


def make_folds(
    labels: np.ndarray,
    num_folds: int = 5,
    seed: int = 0,
    class_names: Optional[Sequence[str]] = None
) -> SplitPlan:
    """
    Split sample indices into stratified folds.

    Each class contributes the same number of samples to every fold and to
    both halves of every fold; per class, (count // (2 * num_folds)) *
    (2 * num_folds) samples are used and the remainder is dropped.

    Args:
        labels: (n,) class labels
        num_folds: Number of folds F >= 2
        seed: Seed of the per-class shuffles
        class_names: Names used in error messages

    Returns:
        SplitPlan; fold f trains on all other folds and evaluates on its
        own two halves

    Raises:
        SplitError: If a class has fewer than 2 * num_folds samples

    Example:
        >>> plan = make_folds(np.repeat(np.arange(3), 13), num_folds=5)
        >>> plan.dropped
        9
    """
    if num_folds < 2:
        raise SplitError(f"num_folds must be at least 2, got {num_folds}")

    labels = np.asarray(labels, dtype=np.int64)
    block = 2 * num_folds
    fold_members = [[[], []] for _ in range(num_folds)]
    usable_per_class: Dict[int, int] = {}
    dropped = 0

    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        if len(members) < block:
            name = class_names[cls] if class_names is not None else str(int(cls))
            raise SplitError(
                f"Class {name!r} has {len(members)} samples; {num_folds} folds need at least {block}"
            )

        usable = (len(members) // block) * block
        rng = make_rng(derive_seed(seed, "folds", int(cls)))
        chosen = members[rng.permutation(len(members))[:usable]]
        usable_per_class[int(cls)] = usable
        dropped += len(members) - usable

        per_fold = usable // num_folds
        half = per_fold // 2
        for f in range(num_folds):
            part = chosen[f * per_fold:(f + 1) * per_fold]
            fold_members[f][0].append(part[:half])
            fold_members[f][1].append(part[half:])

    if dropped:
        logger.info(f"Dropped {dropped} samples so every class divides into {block} equal parts")

    halves = [
        (np.sort(np.concatenate(first)), np.sort(np.concatenate(second)))
        for first, second in fold_members
    ]
    folds = []
    for f, (first, second) in enumerate(halves):
        train = np.sort(np.concatenate([
            np.concatenate(halves[g]) for g in range(num_folds) if g != f
        ]))
        folds.append(Fold(index=f, train=train, first=first, second=second))

    return SplitPlan(folds=folds, dropped=dropped, usable_per_class=usable_per_class)


def assert_no_leakage(train_rows: np.ndarray, estimator_rows: np.ndarray) -> None:
    """
    Verify that no embedding-training row reaches an estimator.

    Raises:
        LeakageError: Listing the first overlapping rows
    """
    overlap = np.intersect1d(train_rows, estimator_rows)
    if len(overlap):
        raise LeakageError(
            f"{len(overlap)} embedding-training rows reached the estimators (e.g. {overlap[:5].tolist()})"
        )
