"""
Trace file parsing and dataset directory I/O.

File format (one trace per file, UTF-8):
    <time_seconds> <dir> [is_dummy]
where dir is one of +1, -1, 1 and is_dummy is 0/1. Lines starting with
'#' are comments. Datasets are laid out as <root>/<class_name>/<trace_id>.txt,
optionally listed explicitly by a JSON manifest at <root>/manifest.json.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError

from src.traces.models import Trace
from src.utils.errors import DatasetError, TraceParseError

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TRACE_SUFFIX = ".txt"

_DIRECTION_TOKENS = {"+1": 1, "1": 1, "-1": -1}
_DUMMY_TOKENS = {"0": False, "1": True}


# ============================================================================
# Single traces
# ============================================================================


def parse_trace(raw_lines: Iterable[str], label: int = 0, source: str = "<stream>") -> Trace:
    """
    Parse a text record stream into a Trace.

    Events are materialized in file order; no sorting is applied.

    Args:
        raw_lines: Lines of a trace file (newlines optional)
        label: Class index assigned to the trace
        source: Name used in error messages

    Returns:
        Parsed Trace

    Raises:
        TraceParseError: On a malformed record (with its line number) or an empty file

    Example:
        >>> trace = parse_trace(["0.0 +1", "0.12 -1"])
        >>> trace.times.tolist()
        [0.0, 0.12]
    """
    times: List[float] = []
    directions: List[int] = []
    dummies: List[bool] = []

    for line_number, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        tokens = line.replace("−", "-").split()
        if len(tokens) not in (2, 3):
            raise TraceParseError(
                f"expected '<time> <dir> [is_dummy]', got {line!r}",
                line_number=line_number,
                source=source,
            )

        try:
            time = float(tokens[0])
        except ValueError:
            raise TraceParseError(f"invalid timestamp {tokens[0]!r}", line_number, source) from None
        if not math.isfinite(time) or time < 0:
            raise TraceParseError(f"timestamp must be finite and non-negative, got {tokens[0]!r}",
                                  line_number, source)

        direction = _DIRECTION_TOKENS.get(tokens[1])
        if direction is None:
            raise TraceParseError(f"invalid direction {tokens[1]!r}", line_number, source)

        is_dummy = False
        if len(tokens) == 3:
            if tokens[2] not in _DUMMY_TOKENS:
                raise TraceParseError(f"invalid dummy flag {tokens[2]!r}", line_number, source)
            is_dummy = _DUMMY_TOKENS[tokens[2]]

        times.append(time)
        directions.append(direction)
        dummies.append(is_dummy)

    if not times:
        raise TraceParseError("trace contains no packets", source=source)

    return Trace(
        times=np.array(times, dtype=np.float64),
        directions=np.array(directions, dtype=np.int8),
        is_dummy=np.array(dummies, dtype=bool),
        label=label,
    )


def load_trace_file(path: Union[str, Path], label: int = 0) -> Trace:
    """
    Parse one trace file.

    Raises:
        TraceParseError: If the file is malformed, empty or not UTF-8
        DatasetError: If the file cannot be read
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return parse_trace(f, label=label, source=str(path))
    except UnicodeDecodeError as e:
        raise TraceParseError(f"not valid UTF-8 text ({e.reason} at byte {e.start})", source=str(path)) from e
    except OSError as e:
        raise DatasetError(f"Cannot read trace file {path}: {e}") from e


def format_trace(trace: Trace) -> str:
    """Render a trace in the file format, including the is_dummy column."""
    lines = [f"# label={trace.label} packets={len(trace)}"]
    for time, direction, dummy in zip(trace.times, trace.directions, trace.is_dummy):
        lines.append(f"{float(time)!r} {int(direction):+d} {int(bool(dummy))}")
    return "\n".join(lines) + "\n"


def write_trace(trace: Trace, path: Union[str, Path]) -> None:
    """Write a trace file (parent directories are created)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_trace(trace))


# ============================================================================
# Datasets
# ============================================================================


class ManifestEntry(BaseModel):
    """One trace listed by a dataset manifest."""
    path: str = Field(..., min_length=1, description="Trace path relative to the manifest")
    label: Optional[int] = Field(None, ge=0, description="Class index")
    class_name: Optional[str] = Field(None, alias="class", description="Class name (alternative to label)")

    model_config = {"populate_by_name": True}


class DatasetManifest(BaseModel):
    """JSON manifest listing class names and trace files explicitly."""
    classes: List[str] = Field(..., min_length=1)
    traces: List[ManifestEntry] = Field(..., min_length=1)


@dataclass
class LoadedTraces:
    """Raw (unsanitized) traces read from disk."""
    traces: List[Trace]
    class_names: List[str]
    source: str


def _sort_class_names(names: Sequence[str]) -> List[str]:
    if all(name.isdigit() for name in names):
        return sorted(names, key=int)
    return sorted(names)


def _discover_files(root: Path) -> Tuple[List[Tuple[Path, int]], List[str]]:
    manifest_path = root / MANIFEST_NAME
    if manifest_path.exists():
        try:
            with open(manifest_path, "r", encoding="utf-8") as f:
                manifest = DatasetManifest(**json.load(f))
        except (json.JSONDecodeError, PydanticValidationError) as e:
            raise DatasetError(f"Invalid dataset manifest {manifest_path}: {e}") from e

        index = {name: i for i, name in enumerate(manifest.classes)}
        files = []
        for entry in manifest.traces:
            if entry.label is not None:
                label = entry.label
            elif entry.class_name is not None and entry.class_name in index:
                label = index[entry.class_name]
            else:
                raise DatasetError(f"Manifest entry {entry.path!r} has no valid label or class")
            if label >= len(manifest.classes):
                raise DatasetError(f"Manifest entry {entry.path!r} label {label} out of range")
            files.append((root / entry.path, label))
        return files, list(manifest.classes)

    class_dirs = [p for p in root.iterdir() if p.is_dir()]
    if not class_dirs:
        raise DatasetError(f"No class directories found under {root}")

    class_names = _sort_class_names([p.name for p in class_dirs])
    files = []
    for label, name in enumerate(class_names):
        for path in sorted((root / name).glob(f"*{TRACE_SUFFIX}")):
            files.append((path, label))
    return files, class_names


def load_dataset_directory(root: Union[str, Path], threads: int = 1) -> LoadedTraces:
    """
    Load every trace of a dataset directory.

    Class labels follow the manifest order, or the sorted class directory
    names (numerically when all names are integers).

    Args:
        root: Dataset root directory
        threads: Number of parallel file readers

    Returns:
        LoadedTraces with traces in deterministic (class, file name) order

    Raises:
        DatasetError: If the directory, manifest or a file is unusable
        TraceParseError: If a trace file is malformed
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"Dataset root not found: {root}")

    files, class_names = _discover_files(root)
    if not files:
        raise DatasetError(f"No trace files found under {root}")

    logger.debug(f"Reading {len(files)} trace files from {root} with {threads} threads")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            traces = list(pool.map(lambda item: load_trace_file(*item), files))
    else:
        traces = [load_trace_file(path, label) for path, label in files]

    return LoadedTraces(traces=traces, class_names=class_names, source=str(root))


def write_dataset_directory(
    traces: Sequence[Trace],
    root: Union[str, Path],
    class_names: Optional[Sequence[str]] = None
) -> Path:
    """
    Write traces as <root>/<class_name>/<trace_id>.txt plus a manifest.

    Args:
        traces: Traces to write (labels index class_names)
        root: Output directory
        class_names: Names per label (defaults to the label number)

    Returns:
        Path of the written manifest
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)

    num_classes = max((t.label for t in traces), default=-1) + 1
    if class_names is None:
        class_names = [str(c) for c in range(num_classes)]
    class_names = list(class_names)

    counters = [0] * len(class_names)
    entries = []
    for trace in traces:
        name = class_names[trace.label]
        relative = f"{name}/{counters[trace.label]:05d}{TRACE_SUFFIX}"
        counters[trace.label] += 1
        write_trace(trace, root / relative)
        entries.append({"path": relative, "label": trace.label})

    manifest_path = root / MANIFEST_NAME
    with open(manifest_path, "w", encoding="utf-8") as f:
        json.dump({"classes": class_names, "traces": entries}, f, indent=2)

    return manifest_path
