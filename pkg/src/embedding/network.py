"""
Embedding network: conv blocks -> pool -> feature layer -> classifier head.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np

from src.embedding.layers import ACTIVATIONS, Conv1D, Dense, GlobalAvgPool, Layer, softmax, softmax_cross_entropy
from src.embedding.models import EmbeddingConfig
from src.utils.hashing import make_rng

logger = logging.getLogger(__name__)


class EmbeddingNetwork:
    """
    Sequential network split into a feature extractor and a linear head.

    Inputs are (B, L) matrices of one representation kind; a channel axis is
    added internally. `features()` returns the activations of the feature
    layer (the layer before the C-way head).

    Attributes:
        body: Layers producing the feature_dim activations
        head: Dense(feature_dim -> C) classifier
    """

    def __init__(self, config: EmbeddingConfig, input_length: int, num_classes: int, seed: int):
        """
        Build and initialize the layer stack.

        Args:
            config: Architecture settings
            input_length: Representation length L
            num_classes: Number of classes C (head width)
            seed: Seed of the weight initialization stream

        Raises:
            ValueError: If L is too short for the convolution stack
        """
        rng = make_rng(seed)
        activation = ACTIVATIONS[config.activation]

        self.input_length = input_length
        self.num_classes = num_classes
        self.body: List[Layer] = []

        channels, length = 1, input_length
        for block in config.conv_blocks:
            conv = Conv1D(channels, block.channels, block.kernel, block.stride, rng)
            length = conv.output_length(length)
            self.body.extend([conv, activation()])
            channels = block.channels

        self.body.append(GlobalAvgPool())
        self.body.extend([Dense(channels, config.feature_dim, rng), activation()])
        self.head = Dense(config.feature_dim, num_classes, rng)

        logger.debug(f"Built embedding network {self.describe()} for L={input_length}, C={num_classes}")

    @property
    def layers(self) -> List[Layer]:
        return self.body + [self.head]

    def describe(self) -> str:
        return " -> ".join(repr(layer) for layer in self.layers)

    # ------------------------------------------------------------------
    # Parameters
    # ------------------------------------------------------------------

    def parameters(self) -> List[Tuple[str, np.ndarray]]:
        """Named parameter arrays in layer order (shared, not copied)."""
        named = []
        for i, layer in enumerate(self.layers):
            for name in layer.parameter_names():
                named.append((f"{i}.{name}", layer.params[name]))
        return named

    def parameter_dict(self) -> Dict[str, np.ndarray]:
        return dict(self.parameters())

    def load_parameters(self, arrays: Dict[str, np.ndarray]) -> None:
        """
        Replace parameter values in place.

        Raises:
            ValueError: On a missing tensor or shape mismatch
        """
        for i, layer in enumerate(self.layers):
            for name in layer.parameter_names():
                key = f"{i}.{name}"
                if key not in arrays:
                    raise ValueError(f"Missing parameter tensor {key}")
                value = np.asarray(arrays[key], dtype=np.float64)
                if value.shape != layer.params[name].shape:
                    raise ValueError(
                        f"Parameter {key} has shape {value.shape}, expected {layer.params[name].shape}"
                    )
                layer.params[name] = value.copy()

    # ------------------------------------------------------------------
    # Passes
    # ------------------------------------------------------------------

    def features(self, x: np.ndarray) -> np.ndarray:
        out = np.asarray(x, dtype=np.float64)[:, :, None]
        for layer in self.body:
            out = layer.forward(out)
        return out

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Return classifier logits (caches activations for backward)."""
        return self.head.forward(self.features(x))

    def backward(self, grad_logits: np.ndarray) -> None:
        grad = grad_logits
        for layer in reversed(self.layers):
            grad = layer.backward(grad)

    def gradients(self, x: np.ndarray, labels: np.ndarray) -> Tuple[float, List[np.ndarray]]:
        """
        Loss and parameter gradients for one batch.

        Returns:
            (mean cross-entropy, gradients aligned with parameters())
        """
        loss, grad_logits = softmax_cross_entropy(self.forward(x), labels)
        self.backward(grad_logits)
        grads = []
        for layer in self.layers:
            for name in layer.parameter_names():
                grads.append(layer.grads[name])
        return loss, grads

    def loss(self, x: np.ndarray, labels: np.ndarray) -> float:
        loss, _ = softmax_cross_entropy(self.forward(x), labels)
        return loss

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return softmax(self.forward(x))
