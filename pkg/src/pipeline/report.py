"""
Report persistence and console rendering.

A report is written as sorted, indented JSON plus a flat CSV summary with
one row per (fold, representation). Both files are byte-stable for equal
report contents; the CSV carries no timing fields.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

from pydantic import ValidationError
from rich.console import Group
from rich.table import Table

from src.pipeline.models import EstimateReport
from src.utils.errors import ReportError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["fold", "representation", "knn_error", "ber_lower", "mi_bits", "mi_clamped", "baseline_error"]


def report_paths(path: Union[str, Path]) -> Tuple[Path, Path]:
    """(JSON path, CSV path) for a report target; a .csv target gets a .json sibling."""
    path = Path(path)
    json_path = path.with_suffix(".json") if path.suffix == ".csv" else path
    return json_path, json_path.with_suffix(".csv")


def _number(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def render_csv(report: EstimateReport) -> str:
    """CSV summary text; failed folds contribute no rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for fold in sorted(report.folds, key=lambda f: f.fold):
        for rep in fold.representations:
            writer.writerow([
                fold.fold,
                rep.representation,
                _number(rep.knn_error),
                _number(rep.ber_lower),
                _number(rep.mi_bits),
                str(rep.mi_clamped).lower(),
                _number(rep.baseline_error),
            ])
    return buffer.getvalue()


def render_json(report: EstimateReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_report_csv(report: EstimateReport, path: Union[str, Path]) -> Path:
    """Write only the CSV summary of a report."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_csv(report), encoding="utf-8")
    except OSError as e:
        raise ReportError(f"Cannot write report summary {path}: {e}") from e
    return path


def emit_report(report: EstimateReport, path: Union[str, Path]) -> Tuple[Path, Path]:
    """
    Write the JSON report and its CSV summary.

    Args:
        report: Completed report
        path: JSON target (the CSV is written next to it)

    Returns:
        (JSON path, CSV path)

    Raises:
        ReportError: If the report has no folds or a file cannot be written;
                     nothing is written for an empty report

    Example:
        >>> emit_report(report, "results/run.json")
        (PosixPath('results/run.json'), PosixPath('results/run.csv'))
    """
    if not report.folds:
        raise ReportError("Report has no folds; nothing to write")

    json_path, csv_path = report_paths(path)
    json_text = render_json(report)
    csv_text = render_csv(report)

    try:
        json_path.parent.mkdir(parents=True, exist_ok=True)
        json_path.write_text(json_text, encoding="utf-8")
        csv_path.write_text(csv_text, encoding="utf-8")
    except OSError as e:
        raise ReportError(f"Cannot write report {json_path}: {e}") from e

    logger.info(f"Report written to {json_path} (summary {csv_path})")
    return json_path, csv_path


def load_report(path: Union[str, Path]) -> EstimateReport:
    """
    Read a JSON report written by emit_report.

    Raises:
        ReportError: If the file is missing or not a valid report
    """
    path = Path(path)
    try:
        return EstimateReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ReportError(f"Cannot read report {path}: {e}") from e
    except ValidationError as e:
        raise ReportError(f"Invalid report {path}: {e}") from e


def _stat(stat) -> str:
    if stat is None:
        return "-"
    if stat.std is None:
        return f"{stat.mean:.4f}"
    return f"{stat.mean:.4f} ± {stat.std:.4f}"


def format_report(report: EstimateReport) -> Group:
    """Rich renderable with the aggregate summary and the per-fold table."""
    summary = Table(title="Security estimate", show_header=False)
    summary.add_column("Metric", style="cyan")
    summary.add_column("Value")
    summary.add_row("Classes", str(report.num_classes))
    summary.add_row("Traces", str(report.num_traces))
    summary.add_row("Folds ok / failed", f"{len(report.successful_folds)} / {len(report.failed_folds)}")
    summary.add_row("BER (min over representations)", _stat(report.aggregate_ber))
    summary.add_row("MI bits (max over representations)", _stat(report.aggregate_mi))
    summary.add_row("Baseline classifier error", _stat(report.baseline_error))
    if report.consistency is not None:
        summary.add_row("Bound consistency", report.consistency.status.value)
    if report.overhead is not None:
        summary.add_row("Bandwidth overhead", f"{report.overhead['bandwidth_overhead']:.3f}")
        summary.add_row("Latency overhead (s)", f"{report.overhead['latency_overhead']:.3f}")

    folds = Table(title="Per fold")
    for column in ("Fold", "Representation", "1-NN error", "BER bound", "MI bits", "Baseline"):
        folds.add_column(column, justify="right" if column != "Representation" else "left")
    for fold in sorted(report.folds, key=lambda f: f.fold):
        if not fold.succeeded:
            folds.add_row(str(fold.fold), f"[red]failed: {fold.error_type}[/red]", "", "", "", "")
            continue
        for rep in fold.representations:
            folds.add_row(
                str(fold.fold),
                rep.representation,
                f"{rep.knn_error:.4f}",
                f"{rep.ber_lower:.4f}",
                f"{rep.mi_bits:.4f}" + ("*" if rep.mi_clamped else ""),
                "-" if rep.baseline_error is None else f"{rep.baseline_error:.4f}",
            )

    return Group(summary, folds)
