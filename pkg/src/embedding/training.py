"""
Training and feature extraction for embedding networks.

Training runs a fixed number of epochs of momentum SGD,
    v <- momentum * v - lr * g;  p <- p + v,
over mini-batches in a per-epoch permutation drawn from the seeded shuffle
stream. There is no early stopping.
"""

import logging
import time
from typing import Optional

import numpy as np

from src.embedding.models import EmbeddingConfig, EmbeddingModel, FeatureMatrix, FeatureProvenance
from src.embedding.network import EmbeddingNetwork
from src.traces.models import RepresentationKind
from src.utils.errors import EmbeddingDivergenceError, EstimatorError
from src.utils.hashing import derive_seed, make_rng
from src.utils.logging import log_embedding_epoch

logger = logging.getLogger(__name__)

# Rows per forward pass when embedding or predicting
INFERENCE_BATCH = 512


def input_scale_for(matrix: np.ndarray, kind: RepresentationKind) -> float:
    """1/max|x| of a training split for timing inputs, 1.0 otherwise."""
    if RepresentationKind(kind) is RepresentationKind.DIRECTIONAL:
        return 1.0
    peak = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    return 1.0 / peak if peak > 0 else 1.0


def train_embedding(
    matrix: np.ndarray,
    labels: np.ndarray,
    kind: RepresentationKind,
    num_classes: int,
    config: EmbeddingConfig
) -> EmbeddingModel:
    """
    Train an embedding network on one representation kind.

    Args:
        matrix: (n, L) representation matrix of the training traces
        labels: (n,) class indices
        kind: Representation kind of `matrix`
        num_classes: Number of classes C
        config: Architecture and optimizer settings

    Returns:
        Trained EmbeddingModel with per-epoch loss history

    Raises:
        EstimatorError: If fewer than 2 classes or fewer than batch_size samples
        EmbeddingDivergenceError: If the loss becomes non-finite

    Example:
        >>> model = train_embedding(x, y, RepresentationKind.DIRECTIONAL, 2, EmbeddingConfig(epochs=5))
        >>> len(model.loss_history)
        5
    """
    kind = RepresentationKind(kind)
    matrix = np.asarray(matrix, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n, length = matrix.shape

    if len(np.unique(labels)) < 2:
        raise EstimatorError("Embedding training needs at least 2 classes")
    if n < config.batch_size:
        raise EstimatorError(f"Embedding training needs at least batch_size={config.batch_size} samples, got {n}")

    scale = input_scale_for(matrix, kind)
    inputs = matrix * scale

    network = EmbeddingNetwork(config, length, num_classes, seed=derive_seed(config.seed, "init"))
    shuffle_rng = make_rng(derive_seed(config.seed, "shuffle"))

    params = [p for _, p in network.parameters()]
    velocities = [np.zeros_like(p) for p in params]
    history = []
    start = time.time()

    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(n)
        total_loss = 0.0
        for batch_number, offset in enumerate(range(0, n, config.batch_size), start=1):
            batch = order[offset:offset + config.batch_size]
            loss, grads = network.gradients(inputs[batch], labels[batch])
            if not np.isfinite(loss):
                raise EmbeddingDivergenceError(epoch, batch_number, loss)

            for param, grad, velocity in zip(params, grads, velocities):
                velocity *= config.momentum
                velocity -= config.learning_rate * grad
                param += velocity
            total_loss += loss * len(batch)

        epoch_loss = total_loss / n
        history.append(epoch_loss)
        log_embedding_epoch(kind.value, epoch, epoch_loss)

    logger.info(
        f"Trained {kind.value} embedding on {n} samples for {config.epochs} epochs "
        f"(final loss {history[-1]:.4f}, {time.time() - start:.1f}s)"
    )

    return EmbeddingModel(
        config=config,
        representation=kind,
        num_classes=num_classes,
        input_length=length,
        input_scale=scale,
        network=network,
        trained=True,
        loss_history=history,
    )


def _check_inputs(model: EmbeddingModel, matrix: np.ndarray, kind: Optional[RepresentationKind]) -> np.ndarray:
    if kind is not None and RepresentationKind(kind) is not model.representation:
        raise ValueError(
            f"Model was trained on {model.representation.value} vectors, got {RepresentationKind(kind).value}"
        )
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != model.input_length:
        raise ValueError(f"Expected (n, {model.input_length}) inputs, got shape {matrix.shape}")
    return matrix * model.input_scale


def embed(
    model: EmbeddingModel,
    matrix: np.ndarray,
    labels: np.ndarray,
    kind: Optional[RepresentationKind] = None
) -> FeatureMatrix:
    """
    Extract feature-layer activations.

    Labels are attached to the result only; the forward pass never reads them.

    Args:
        model: Trained model
        matrix: (n, L) representation matrix
        labels: (n,) labels carried into the FeatureMatrix
        kind: Representation kind of `matrix` (checked against the model)

    Returns:
        FeatureMatrix of shape (n, feature_dim)

    Raises:
        ValueError: On representation kind or shape mismatch
    """
    inputs = _check_inputs(model, matrix, kind)
    blocks = [
        model.network.features(inputs[i:i + INFERENCE_BATCH])
        for i in range(0, len(inputs), INFERENCE_BATCH)
    ]
    values = np.vstack(blocks) if blocks else np.zeros((0, model.feature_dim))
    return FeatureMatrix(values, labels, FeatureProvenance.for_representation(model.representation))


def predict(model: EmbeddingModel, matrix: np.ndarray, kind: Optional[RepresentationKind] = None) -> np.ndarray:
    """Most likely class per row (ties to the lowest class index)."""
    inputs = _check_inputs(model, matrix, kind)
    predictions = [
        np.argmax(model.network.forward(inputs[i:i + INFERENCE_BATCH]), axis=1)
        for i in range(0, len(inputs), INFERENCE_BATCH)
    ]
    return np.concatenate(predictions) if predictions else np.zeros(0, dtype=np.int64)


def classification_error(
    model: EmbeddingModel,
    matrix: np.ndarray,
    labels: np.ndarray,
    kind: Optional[RepresentationKind] = None
) -> float:
    """Fraction of rows the model's classifier head gets wrong."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        raise ValueError("Cannot compute classification error on an empty set")
    return float(np.mean(predict(model, matrix, kind) != labels))
