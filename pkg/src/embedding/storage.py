"""
Embedding model persistence.

File layout:
    b"WFSE-EMB-1\\n"
    one JSON metadata line (config, representation, shapes, input scale, ...)
    concatenated little-endian float32 tensors in metadata order
"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.embedding.models import EmbeddingConfig, EmbeddingModel
from src.embedding.network import EmbeddingNetwork
from src.traces.models import RepresentationKind
from src.utils.errors import ModelFormatError

logger = logging.getLogger(__name__)

MODEL_HEADER = b"WFSE-EMB-1\n"
_TENSOR_DTYPE = np.dtype("<f4")


def _serialize_tensor(array: np.ndarray) -> bytes:
    return np.ascontiguousarray(array, dtype=_TENSOR_DTYPE).tobytes()


def save_model(model: EmbeddingModel, path: Union[str, Path]) -> Path:
    """
    Write a model file.

    Parameters are stored as float32, so a reloaded model matches the
    original up to float32 rounding.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    tensors = model.network.parameters()
    metadata = {
        "config": model.config.model_dump(),
        "representation": model.representation.value,
        "num_classes": model.num_classes,
        "input_length": model.input_length,
        "input_scale": model.input_scale,
        "trained": model.trained,
        "loss_history": model.loss_history,
        "tensors": [{"name": name, "shape": list(array.shape)} for name, array in tensors],
    }

    with open(path, "wb") as f:
        f.write(MODEL_HEADER)
        f.write(json.dumps(metadata, sort_keys=True).encode("utf-8") + b"\n")
        for _, array in tensors:
            f.write(_serialize_tensor(array))

    logger.info(f"Saved {model.representation.value} embedding model to {path}")
    return path


def load_model(path: Union[str, Path]) -> EmbeddingModel:
    """
    Read a model file written by save_model.

    Raises:
        ModelFormatError: On a wrong header, bad metadata or truncated tensors
    """
    path = Path(path)
    with open(path, "rb") as f:
        blob = f.read()

    if not blob.startswith(MODEL_HEADER):
        raise ModelFormatError(f"{path}: not a WFSE-EMB-1 model file")

    body = blob[len(MODEL_HEADER):]
    newline = body.find(b"\n")
    if newline < 0:
        raise ModelFormatError(f"{path}: missing metadata line")

    try:
        metadata = json.loads(body[:newline].decode("utf-8"))
        config = EmbeddingConfig(**metadata["config"])
        kind = RepresentationKind(metadata["representation"])
    except (ValueError, KeyError) as e:
        raise ModelFormatError(f"{path}: invalid metadata: {e}") from e

    payload = body[newline + 1:]
    arrays = {}
    offset = 0
    for spec in metadata["tensors"]:
        count = int(np.prod(spec["shape"], dtype=np.int64))
        size = count * _TENSOR_DTYPE.itemsize
        if offset + size > len(payload):
            raise ModelFormatError(f"{path}: truncated tensor {spec['name']}")
        arrays[spec["name"]] = np.frombuffer(payload, dtype=_TENSOR_DTYPE, count=count, offset=offset).reshape(
            spec["shape"]
        ).astype(np.float64)
        offset += size
    if offset != len(payload):
        raise ModelFormatError(f"{path}: {len(payload) - offset} trailing bytes after tensors")

    network = EmbeddingNetwork(config, metadata["input_length"], metadata["num_classes"], seed=0)
    try:
        network.load_parameters(arrays)
    except ValueError as e:
        raise ModelFormatError(f"{path}: {e}") from e

    return EmbeddingModel(
        config=config,
        representation=kind,
        num_classes=metadata["num_classes"],
        input_length=metadata["input_length"],
        input_scale=float(metadata["input_scale"]),
        network=network,
        trained=bool(metadata["trained"]),
        loss_history=[float(v) for v in metadata["loss_history"]],
    )
