"""
Estimation pipeline: fold planning, per-fold estimation, aggregation and reports.
"""

from src.pipeline.convergence import run_convergence, write_convergence_csv
from src.pipeline.folds import assert_no_leakage, make_folds
from src.pipeline.models import (
    AggregateStat,
    ConvergencePoint,
    EstimateReport,
    Fold,
    FoldResult,
    RepresentationResult,
    RunConfig,
    SplitPlan,
)
from src.pipeline.report import emit_report, format_report, load_report, write_report_csv
from src.pipeline.runner import estimate_dataset, run_estimation, run_fold

__all__ = [
    "run_convergence",
    "write_convergence_csv",
    "assert_no_leakage",
    "make_folds",
    "AggregateStat",
    "ConvergencePoint",
    "EstimateReport",
    "Fold",
    "FoldResult",
    "RepresentationResult",
    "RunConfig",
    "SplitPlan",
    "emit_report",
    "format_report",
    "load_report",
    "write_report_csv",
    "estimate_dataset",
    "run_estimation",
    "run_fold",
]
