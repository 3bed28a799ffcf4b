"""
End-to-end estimation: load -> defend -> split -> embed -> estimate -> bound.

The defense is applied once to the whole dataset before splitting. Every
fold trains one embedding per enabled representation on its training
folds, embeds its evaluation halves, and hands only those rows to the
estimators. Aggregates take the minimum BER and maximum MI over
representations per fold, then average across successful folds.
"""

import json
import logging
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from src import __version__
from src.bounds.information import check_consistency
from src.defenses.apply import apply_defense_to_dataset
from src.defenses.models import ExternalSpec, OverheadStats
from src.embedding.models import EmbeddingConfig, EmbeddingModel, FeatureMatrix, FeatureProvenance
from src.embedding.storage import load_model, save_model
from src.embedding.training import classification_error, embed, train_embedding
from src.estimators.ber import estimate_ber
from src.estimators.mi import estimate_mi
from src.features.manual import manual_feature_matrix
from src.pipeline.folds import assert_no_leakage, make_folds
from src.pipeline.models import (
    AggregateStat,
    EstimateReport,
    Fold,
    FoldResult,
    Provenance,
    RepresentationResult,
    RunConfig,
)
from src.synth.generator import generate
from src.traces.models import Dataset, RepresentationKind
from src.traces.parser import load_dataset_directory
from src.traces.sanitizer import build_dataset
from src.utils.errors import EstimatorError, WfseError
from src.utils.hashing import compute_content_hash, derive_seed
from src.utils.logging import (
    log_estimation_completed,
    log_fold_completed,
    log_fold_failed,
    log_fold_started,
)

logger = logging.getLogger(__name__)


# ============================================================================
# Data preparation
# ============================================================================


def load_run_dataset(cfg: RunConfig) -> Tuple[Dataset, Dict[str, int]]:
    """
    Load and sanitize the configured data source.

    Returns:
        (dataset, rejection counts by reason)

    Raises:
        DatasetError: If the source is unusable
        TraceParseError: If a trace file is malformed
    """
    if cfg.synthetic is not None:
        data = generate(cfg.synthetic)
        traces = data.dataset.traces
        class_names = data.dataset.class_names
        source = f"synthetic:{cfg.synthetic.variant}"
    else:
        loaded = load_dataset_directory(cfg.dataset_root, threads=cfg.threads)
        traces, class_names, source = loaded.traces, loaded.class_names, loaded.source

    dataset, summary = build_dataset(traces, class_names, cfg.trace_length, source=source)
    rejected = {reason.value: count for reason, count in summary.rejected.items()}
    return dataset, rejected


def defend_dataset(dataset: Dataset, cfg: RunConfig) -> Tuple[Dataset, Optional[OverheadStats]]:
    """
    Apply the configured defense to every trace.

    External (pre-defended) data and runs without a defense pass through
    unchanged with no overhead statistics.
    """
    if cfg.defense is None or isinstance(cfg.defense, ExternalSpec):
        return dataset, None

    defended = apply_defense_to_dataset(dataset.traces, cfg.defense, threads=cfg.threads)
    result = Dataset(
        traces=defended.traces,
        num_classes=dataset.num_classes,
        class_names=list(dataset.class_names),
        trace_length=cfg.trace_length,
    )
    return result, defended.overhead


# ============================================================================
# Folds
# ============================================================================


def fold_seed(master_seed: int, fold_index: int) -> int:
    return derive_seed(master_seed, "fold", fold_index)


def model_path(
    model_dir: str,
    fold_index: int,
    kind: RepresentationKind,
    train_matrix: np.ndarray,
    train_labels: np.ndarray,
    embedding_cfg: EmbeddingConfig
) -> Path:
    """Model file keyed by fold, representation and a digest of config and training rows."""
    digest = compute_content_hash(
        json.dumps(embedding_cfg.model_dump(), sort_keys=True).encode("utf-8")
        + np.ascontiguousarray(train_matrix, dtype=np.float64).tobytes()
        + np.ascontiguousarray(train_labels, dtype=np.int64).tobytes()
    )
    return Path(model_dir) / f"fold{fold_index}_{RepresentationKind(kind).value}_{digest[:12]}.wfse"


def fold_model(
    train_matrix: np.ndarray,
    train_labels: np.ndarray,
    kind: RepresentationKind,
    num_classes: int,
    embedding_cfg: EmbeddingConfig,
    model_dir: Optional[str],
    fold_index: int
) -> EmbeddingModel:
    """
    Train the fold's embedding, or reuse a stored one.

    With a model directory, a file written for the same config and training
    rows is loaded instead of retraining; otherwise the trained model is
    saved there. Reloaded parameters are float32-rounded.

    Raises:
        EstimatorError: If training cannot start
        ModelFormatError: If a matching model file is corrupt
    """
    if model_dir is None:
        return train_embedding(train_matrix, train_labels, kind, num_classes, embedding_cfg)

    path = model_path(model_dir, fold_index, kind, train_matrix, train_labels, embedding_cfg)
    if path.exists():
        logger.info(f"Reusing embedding model {path}")
        return load_model(path)

    model = train_embedding(train_matrix, train_labels, kind, num_classes, embedding_cfg)
    save_model(model, path)
    return model


def run_fold(dataset: Dataset, fold: Fold, cfg: RunConfig) -> FoldResult:
    """
    Estimate BER and MI on one fold.

    Embeddings see only `fold.train`; estimators see only the embedded
    evaluation halves. A toolkit error, or a ValueError or ArithmeticError
    raised by the numeric code, aborts the fold and is recorded in the
    returned result instead of propagating.

    Args:
        dataset: Defended dataset
        fold: Fold indices
        cfg: Run configuration

    Returns:
        FoldResult with status "ok" or "failed"
    """
    start = time.time()
    timing: Dict[str, float] = {}
    seed = fold_seed(cfg.seed, fold.index)
    num_classes = dataset.num_classes
    labels = dataset.labels
    evaluation = fold.evaluation

    log_fold_started(fold.index, len(fold.train) + len(evaluation))

    try:
        assert_no_leakage(fold.train, evaluation)
        eval_labels = labels[evaluation]

        features: List[FeatureMatrix] = []
        baselines: Dict[str, float] = {}
        for kind in cfg.representations:
            stage = time.time()
            matrix = dataset.representation(kind)
            embedding_cfg = cfg.embedding.model_copy(
                update={"seed": derive_seed(seed, "embedding", kind.value)}
            )
            model = fold_model(
                matrix[fold.train], labels[fold.train], kind, num_classes, embedding_cfg, cfg.model_dir, fold.index
            )
            embedded = embed(model, matrix[evaluation], eval_labels, kind)
            features.append(embedded)
            if cfg.baseline_classifier_error:
                baselines[embedded.provenance.value] = classification_error(
                    model, matrix[evaluation], eval_labels, kind
                )
            timing[f"embedding_{kind.value}"] = time.time() - stage

        if cfg.include_manual_features:
            manual = manual_feature_matrix([dataset.traces[i] for i in evaluation])
            features.append(FeatureMatrix(manual, eval_labels, FeatureProvenance.MANUAL))

        # Rows of the embedded matrices: E1 first, then E2
        halves = (
            np.arange(len(fold.first)),
            np.arange(len(fold.first), len(evaluation)),
        )

        stage = time.time()
        ber = estimate_ber(features, halves, num_classes, cfg.estimator.knn_backend)
        mi = estimate_mi(features, halves, num_classes, k=cfg.estimator.k_mi, backend=cfg.estimator.knn_backend)
        timing["estimation"] = time.time() - stage
    except (WfseError, ValueError, ArithmeticError) as e:
        log_fold_failed(fold.index, type(e).__name__, str(e))
        timing["total"] = time.time() - start
        return FoldResult(
            fold=fold.index,
            status="failed",
            error_type=type(e).__name__,
            error_message=str(e),
            num_train=len(fold.train),
            num_eval=len(evaluation),
            timing_seconds=timing,
        )

    representations = []
    for ber_part, mi_part in zip(ber.breakdown, mi.breakdown):
        representations.append(RepresentationResult(
            representation=ber_part.tag,
            knn_error=ber_part.knn_error,
            ber_lower=ber_part.lower_bound,
            mi_bits=mi_part.mi_bits,
            mi_clamped=mi_part.clamped,
            baseline_error=baselines.get(ber_part.tag),
        ))
        log_fold_completed(fold.index, ber_part.tag, ber_part.knn_error, ber_part.lower_bound, mi_part.mi_bits)

    timing["total"] = time.time() - start
    return FoldResult(
        fold=fold.index,
        status="ok",
        num_train=len(fold.train),
        num_eval=len(evaluation),
        representations=representations,
        ber_min=ber.aggregate,
        mi_max=mi.aggregate,
        best_ber_representation=ber.best_representation,
        best_mi_representation=mi.best_representation,
        baseline_error=min(baselines.values()) if baselines else None,
        consistency=check_consistency(ber.aggregate, mi.aggregate, num_classes),
        timing_seconds=timing,
    )


# ============================================================================
# Aggregation
# ============================================================================


def _mean_by_representation(folds: List[FoldResult], attribute: str) -> Dict[str, float]:
    values: Dict[str, List[float]] = {}
    for fold in folds:
        for rep in fold.representations:
            values.setdefault(rep.representation, []).append(getattr(rep, attribute))
    return {tag: float(np.mean(v)) for tag, v in sorted(values.items())}


def make_provenance(cfg: RunConfig) -> Provenance:
    config = cfg.model_dump(mode="json")
    return Provenance(
        tool_version=__version__,
        config=config,
        config_hash=compute_content_hash(json.dumps(config, sort_keys=True)),
        master_seed=cfg.seed,
        fold_seeds={str(i): fold_seed(cfg.seed, i) for i in cfg.fold_indices},
    )


def estimate_dataset(
    dataset: Dataset,
    cfg: RunConfig,
    overhead: Optional[OverheadStats] = None,
    rejected: Optional[Dict[str, int]] = None
) -> EstimateReport:
    """
    Run the configured folds on an already defended dataset.

    Args:
        dataset: Defended, sanitized dataset
        cfg: Run configuration
        overhead: Defense cost to record in the report
        rejected: Sanitization rejection counts to record in the report

    Returns:
        EstimateReport; aggregates are None when every fold failed

    Raises:
        SplitError: If a class is too small for cfg.num_folds
    """
    start = time.time()
    plan = make_folds(
        dataset.labels,
        num_folds=cfg.num_folds,
        seed=derive_seed(cfg.seed, "folds"),
        class_names=dataset.class_names,
    )

    results = [run_fold(dataset, plan.folds[i], cfg) for i in cfg.fold_indices]
    succeeded = [r for r in results if r.succeeded]

    aggregate_ber = aggregate_mi = baseline = consistency = None
    if succeeded:
        aggregate_ber = AggregateStat.from_values([r.ber_min for r in succeeded])
        aggregate_mi = AggregateStat.from_values([r.mi_max for r in succeeded])
        consistency = check_consistency(aggregate_ber.mean, aggregate_mi.mean, dataset.num_classes)
        baselines = [r.baseline_error for r in succeeded if r.baseline_error is not None]
        if baselines:
            baseline = AggregateStat.from_values(baselines)

    return EstimateReport(
        num_classes=dataset.num_classes,
        class_names=list(dataset.class_names),
        num_traces=len(dataset),
        dropped_samples=plan.dropped,
        rejected_traces=dict(rejected or {}),
        defense=cfg.defense.model_dump(mode="json") if cfg.defense is not None else None,
        overhead=overhead.to_dict() if overhead is not None else None,
        folds=results,
        aggregate_ber=aggregate_ber,
        aggregate_mi=aggregate_mi,
        per_representation_ber=_mean_by_representation(succeeded, "ber_lower"),
        per_representation_mi=_mean_by_representation(succeeded, "mi_bits"),
        baseline_error=baseline,
        consistency=consistency,
        provenance=make_provenance(cfg),
        timing_seconds={"folds": time.time() - start},
    )


def run_estimation(cfg: RunConfig) -> EstimateReport:
    """
    Run the full pipeline and persist the report when cfg.output is set.

    Args:
        cfg: Validated run configuration

    Returns:
        EstimateReport

    Raises:
        DataError: If the data cannot be loaded or split
        EstimatorError: If every fold failed (the report is still written)

    Example:
        >>> cfg = RunConfig.from_file("data/configs/example_run.json")
        >>> report = run_estimation(cfg)
        >>> report.aggregate_ber.mean <= report.baseline_error.mean + 0.01
        True
    """
    from src.pipeline.report import emit_report

    start = time.time()
    stage = time.time()
    dataset, rejected = load_run_dataset(cfg)
    load_seconds = time.time() - stage

    stage = time.time()
    dataset, overhead = defend_dataset(dataset, cfg)
    defense_seconds = time.time() - stage

    report = estimate_dataset(dataset, cfg, overhead, rejected)
    report.timing_seconds.update({
        "load": load_seconds,
        "defense": defense_seconds,
        "total": time.time() - start,
    })

    if cfg.output:
        emit_report(report, cfg.output)

    log_estimation_completed(
        report.aggregate_ber.mean if report.aggregate_ber else None,
        report.aggregate_mi.mean if report.aggregate_mi else None,
        len(report.successful_folds),
        len(report.failed_folds),
        report.timing_seconds["total"],
    )

    if not report.successful_folds:
        first = report.failed_folds[0]
        raise EstimatorError(f"All folds failed; fold {first.fold}: {first.error_type}: {first.error_message}")
    return report
