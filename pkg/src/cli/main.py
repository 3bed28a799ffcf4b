"""
Command-line interface of the WF security estimation toolkit.

Usage:
    # Estimate BER and MI for a configured run
    python -m src.cli --config data/configs/example_run.json estimate
    python -m src.cli --config data/configs/example_run.json estimate --model-dir models/

    # Generate a synthetic trace dataset and print its oracle values
    python -m src.cli --out data/synthetic synth --variant template_traces --num-classes 10

    # Apply a defense preset to a dataset
    python -m src.cli --out data/awf_tamaraw defend data/awf --preset tamaraw

    # Feasible (BER, MI) region and merged-trace bounds
    python -m src.cli --out region.csv bounds --classes 100
    python -m src.cli merged-oracle --classes 100 --max-m 8

    # Re-render a stored report and rewrite its CSV summary
    python -m src.cli report results/run.json

After `pip install -e .` the same commands run as `wfse <command>`.

Global options (--config, --seed, --threads, --out, --log-level) precede the
subcommand. WFSE_SEED, WFSE_THREADS, WFSE_OUTPUT and WFSE_LOG_LEVEL are read
from the environment (or a .env file); command-line flags win.

Exit codes: 0 success, 1 unexpected error, 2 configuration error,
3 data error, 4 numerical failure.
"""

import csv
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from src import __version__
from src.utils.errors import ConfigError, WfseError
from src.utils.logging import setup_logging

logger = logging.getLogger(__name__)

console = Console()
error_console = Console(stderr=True)


# ============================================================================
# Shared plumbing
# ============================================================================


def handle_errors(command):
    """Map toolkit and validation errors to a stderr panel and an exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except WfseError as e:
            error_console.print(Panel(str(e), title=f"[bold red]{type(e).__name__}", border_style="red"))
            sys.exit(e.exit_code)
        except ValidationError as e:
            error_console.print(Panel(str(e), title="[bold red]Invalid configuration", border_style="red"))
            sys.exit(ConfigError.exit_code)
        except click.ClickException:
            raise
        except Exception as e:
            logger.exception("Unexpected failure")
            error_console.print(Panel(f"{type(e).__name__}: {e}", title="[bold red]Error", border_style="red"))
            sys.exit(1)
    return wrapper


def _require_output(ctx: click.Context, what: str) -> Path:
    output = ctx.obj.get("output")
    if not output:
        raise ConfigError(f"--out is required to write {what}")
    return Path(output)


def _load_run_config(ctx: click.Context):
    from src.pipeline.models import RunConfig

    if not ctx.obj.get("config"):
        raise ConfigError("--config is required for this command")
    cfg = RunConfig.from_file(ctx.obj["config"]).with_env()
    return cfg.with_overrides(
        seed=ctx.obj.get("seed"),
        threads=ctx.obj.get("threads"),
        output=ctx.obj.get("output"),
    )


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object")
    return data


# ============================================================================
# Command group
# ============================================================================


@click.group()
@click.version_option(__version__, prog_name="wfse")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Run configuration (JSON)")
@click.option("--seed", type=click.IntRange(min=0), default=None, envvar="WFSE_SEED", help="Master seed")
@click.option("--threads", type=click.IntRange(min=1), default=None, envvar="WFSE_THREADS", help="Worker threads")
@click.option("--out", "output", type=click.Path(), default=None, envvar="WFSE_OUTPUT", help="Output path")
@click.option(
    "--log-level",
    type=click.Choice(["debug", "info", "warn"], case_sensitive=False),
    default=None,
    envvar="WFSE_LOG_LEVEL",
    help="Log level (default: info)",
)
@click.pass_context
def cli(ctx, config_path, seed, threads, output, log_level):
    """Estimate the security of website fingerprinting defenses."""
    setup_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update(config=config_path, seed=seed, threads=threads, output=output)


# ============================================================================
# synth
# ============================================================================


def _write_feature_csv(features, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([f"x{j}" for j in range(features.dim)] + ["label"])
        for row, label in zip(features.values, features.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])
    return path


@cli.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), default=None, help="Synthetic spec (JSON)")
@click.option(
    "--variant",
    type=click.Choice(["gaussian_1d", "separated_clusters", "template_traces"]),
    default="template_traces",
    show_default=True,
)
@click.option("--num-classes", type=int, default=None)
@click.option("--samples-per-class", type=int, default=None)
@click.option("--flip-prob", type=float, default=None)
@click.option("--trace-len", type=int, default=None)
@click.pass_context
@handle_errors
def synth(ctx, spec_path, variant, num_classes, samples_per_class, flip_prob, trace_len):
    """Generate a synthetic dataset and print its oracle BER and MI."""
    from src.synth import generate, oracle_ber, oracle_mi, parse_synth_spec
    from src.traces.parser import write_dataset_directory

    if spec_path:
        data = _load_json(spec_path)
    else:
        data = {"variant": variant}
        for key, value in (
            ("num_classes", num_classes),
            ("samples_per_class", samples_per_class),
            ("flip_prob", flip_prob),
            ("trace_len", trace_len),
        ):
            if value is not None:
                data[key] = value
    if ctx.obj.get("seed") is not None:
        data["seed"] = ctx.obj["seed"]
    spec = parse_synth_spec(data)

    generated = generate(spec)
    with console.status("[bold yellow]Computing oracle values...", spinner="dots"):
        ber, mi = oracle_ber(spec), oracle_mi(spec)

    table = Table(title=f"Oracle values ({spec.variant})")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_column("Method")
    for name, value in (("Bayes error", ber), ("Mutual information (bits)", mi)):
        text = f"{value.value:.6f}" + (f" ± {value.std_error:.6f}" if value.std_error else "")
        table.add_row(name, text, value.method)
    console.print(table)

    if ctx.obj.get("output"):
        output = Path(ctx.obj["output"])
        if generated.dataset is not None:
            write_dataset_directory(generated.dataset.traces, output, generated.dataset.class_names)
        else:
            _write_feature_csv(generated.features, output)
        console.print(f"✓ Wrote {generated.features.num_samples} samples to {output}", style="bold green")


# ============================================================================
# defend
# ============================================================================


@cli.command()
@click.argument("dataset_root", type=click.Path(exists=True, file_okay=False))
@click.option("--preset", type=click.Choice(["front_t1", "front_t2", "tamaraw"]), default=None)
@click.option("--defense-config", type=click.Path(exists=True), default=None, help="Defense block (JSON)")
@click.pass_context
@handle_errors
def defend(ctx, dataset_root, preset, defense_config):
    """Apply a defense to every trace of DATASET_ROOT and write the result."""
    from src.defenses.apply import apply_defense_to_dataset
    from src.defenses.models import defense_preset, parse_defense_spec
    from src.traces.parser import load_dataset_directory, write_dataset_directory
    from src.traces.sanitizer import build_dataset

    if (preset is None) == (defense_config is None):
        raise ConfigError("Give exactly one of --preset and --defense-config")
    output = _require_output(ctx, "the defended dataset")
    seed = ctx.obj.get("seed") or 0
    threads = ctx.obj.get("threads") or 1

    if preset:
        spec = defense_preset(preset, seed=seed)
    else:
        data = _load_json(defense_config)
        if ctx.obj.get("seed") is not None:
            data["seed"] = seed
        spec = parse_defense_spec(data)

    loaded = load_dataset_directory(dataset_root, threads=threads)
    dataset, _ = build_dataset(loaded.traces, loaded.class_names, source=loaded.source)

    with console.status(f"[bold yellow]Applying {spec.variant} to {len(dataset)} traces...", spinner="dots"):
        defended = apply_defense_to_dataset(dataset.traces, spec, threads=threads)
    write_dataset_directory(defended.traces, output, dataset.class_names)

    table = Table(title="Defense overhead")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    for key, value in defended.overhead.to_dict().items():
        table.add_row(key, f"{value:.4f}" if isinstance(value, float) else str(value))
    console.print(table)
    console.print(f"✓ Defended dataset written to {output}", style="bold green")


# ============================================================================
# estimate / convergence
# ============================================================================


@cli.command()
@click.option("--model-dir", type=click.Path(file_okay=False), default=None,
              help="Save trained embeddings here and reuse matching ones")
@click.pass_context
@handle_errors
def estimate(ctx, model_dir):
    """Run the estimation pipeline configured by --config."""
    from src.pipeline.report import format_report
    from src.pipeline.runner import run_estimation

    cfg = _load_run_config(ctx).with_overrides(model_dir=model_dir)
    report = run_estimation(cfg)
    console.print(format_report(report))
    if cfg.output:
        console.print(f"✓ Report written to {cfg.output}", style="bold green")


@cli.command()
@click.option("--sizes", required=True, help="Comma-separated traces-per-class sizes, e.g. 20,40,80")
@click.pass_context
@handle_errors
def convergence(ctx, sizes):
    """Repeat the configured estimation on growing traces-per-class subsets."""
    from src.pipeline.convergence import run_convergence, write_convergence_csv

    try:
        parsed = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError as e:
        raise ConfigError(f"Invalid --sizes {sizes!r}: {e}") from e

    cfg = _load_run_config(ctx)
    points = run_convergence(cfg, parsed)

    table = Table(title="Convergence")
    for column in ("Traces/class", "BER", "MI bits", "Folds ok"):
        table.add_column(column, justify="right")
    for point in points:
        table.add_row(
            str(point.traces_per_class),
            "-" if point.aggregate_ber is None else f"{point.aggregate_ber.mean:.4f}",
            "-" if point.aggregate_mi is None else f"{point.aggregate_mi.mean:.4f}",
            str(point.successful_folds),
        )
    console.print(table)

    if cfg.output:
        path = write_convergence_csv(points, Path(cfg.output).with_suffix(".csv"))
        console.print(f"✓ Convergence table written to {path}", style="bold green")


# ============================================================================
# bounds / merged-oracle
# ============================================================================


@cli.command()
@click.option("--classes", "num_classes", type=click.IntRange(min=2), required=True)
@click.option("--points", type=click.IntRange(min=2), default=400, show_default=True)
@click.option("--ber", type=float, default=None, help="Check an estimate pair against the region")
@click.option("--mi", "mi_bits", type=float, default=None, help="MI in bits for --ber")
@click.pass_context
@handle_errors
def bounds(ctx, num_classes, points, ber, mi_bits):
    """Fano/Kovalevskij feasible region for C classes."""
    from src.bounds.information import bound_region, check_consistency, write_bound_region_csv

    if (ber is None) != (mi_bits is None):
        raise ConfigError("--ber and --mi must be given together")

    region = bound_region(num_classes, points)
    if ctx.obj.get("output"):
        path = write_bound_region_csv(region, ctx.obj["output"])
        console.print(f"✓ Region written to {path}", style="bold green")
    else:
        table = Table(title=f"Feasible region, C={num_classes}")
        for column in ("BER", "Fano (bits)", "Kovalevskij (bits)"):
            table.add_column(column, justify="right")
        step = max(1, len(region.error_rates) // 10)
        rows = region.rows()
        for rate, fano, kovalevskij in rows[::step] + ([rows[-1]] if (len(rows) - 1) % step else []):
            table.add_row(f"{rate:.4f}", f"{fano:.4f}", f"{kovalevskij:.4f}")
        console.print(table)

    if ber is not None:
        result = check_consistency(ber, mi_bits, num_classes)
        style = "bold green" if result.is_consistent else "bold red"
        console.print(
            f"({ber:.4f}, {mi_bits:.4f} bits): {result.status.value} "
            f"[Fano {result.fano_bits:.4f}, Kovalevskij {result.kovalevskij_bits:.4f}]",
            style=style,
        )


@cli.command("merged-oracle")
@click.option("--classes", "num_classes", type=click.IntRange(min=2), required=True)
@click.option("--max-m", type=click.IntRange(min=1), default=8, show_default=True)
@handle_errors
def merged_oracle(num_classes, max_m):
    """Theoretical merged-trace error 1 - 1/M and the MI interval it admits."""
    from src.bounds.information import merged_bounds_table

    try:
        rows = merged_bounds_table(max_m, num_classes)
    except ValueError as e:
        raise ConfigError(str(e)) from e

    table = Table(title=f"Merged traces, C={num_classes}")
    for column in ("M", "Error 1-1/M", "Fano (bits)", "Kovalevskij (bits)"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(str(row.m), f"{row.theoretical_error:.4f}", f"{row.fano_bits:.4f}", f"{row.kovalevskij_bits:.4f}")
    console.print(table)


# ============================================================================
# report / features
# ============================================================================


@cli.command()
@click.argument("report_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="CSV target (default: next to the report)")
@handle_errors
def report(report_path, csv_path):
    """Render a stored JSON report and rewrite its CSV summary."""
    from src.pipeline.report import format_report, load_report, report_paths, write_report_csv

    loaded = load_report(report_path)
    console.print(format_report(loaded))
    target = write_report_csv(loaded, csv_path or report_paths(report_path)[1])
    console.print(f"✓ Summary written to {target}", style="bold green")


@cli.command()
@click.argument("dataset_root", type=click.Path(exists=True, file_okay=False))
@click.pass_context
@handle_errors
def features(ctx, dataset_root):
    """Export the manual features of DATASET_ROOT as CSV."""
    from src.features.manual import export_manual_features_csv
    from src.traces.parser import load_dataset_directory
    from src.traces.sanitizer import build_dataset

    output = _require_output(ctx, "the feature table")
    loaded = load_dataset_directory(dataset_root, threads=ctx.obj.get("threads") or 1)
    dataset, _ = build_dataset(loaded.traces, loaded.class_names, source=loaded.source)
    export_manual_features_csv(dataset.traces, output)
    console.print(f"✓ Features of {len(dataset)} traces written to {output}", style="bold green")


def main():
    load_dotenv()
    cli(obj={})


if __name__ == "__main__":
    main()
