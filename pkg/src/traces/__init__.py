"""
Packet traces: data model, file I/O, sanitization and fixed-length encodings.
"""

from src.traces.models import (
    DEFAULT_TRACE_LENGTH,
    Dataset,
    Direction,
    RepresentationKind,
    RepVector,
    Trace,
    TraceEvent,
)
from src.traces.parser import (
    load_dataset_directory,
    load_trace_file,
    parse_trace,
    write_dataset_directory,
    write_trace,
)
from src.traces.representation import representation_matrix, timing_to_trace, to_representation
from src.traces.sanitizer import (
    RejectionReason,
    SanitizeRejection,
    build_dataset,
    sanitize,
    sanitize_all,
)

__all__ = [
    "DEFAULT_TRACE_LENGTH",
    "Dataset",
    "Direction",
    "RepresentationKind",
    "RepVector",
    "Trace",
    "TraceEvent",
    "load_dataset_directory",
    "load_trace_file",
    "parse_trace",
    "write_dataset_directory",
    "write_trace",
    "representation_matrix",
    "timing_to_trace",
    "to_representation",
    "RejectionReason",
    "SanitizeRejection",
    "build_dataset",
    "sanitize",
    "sanitize_all",
]
