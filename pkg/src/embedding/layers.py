"""
Layer vocabulary of the embedding network.

Activations flow as float64 arrays shaped (batch, time, channels) through
the convolution blocks and (batch, features) after pooling. Each layer keeps
the cache of its last forward pass; backward() consumes it, stores parameter
gradients in `grads` and returns the gradient with respect to the input.
"""

from typing import Dict, List, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def glorot_uniform(shape: Tuple[int, ...], fan_in: int, fan_out: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform initialization in +-sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Layer:
    """Base layer: no parameters, identity shapes."""

    def __init__(self):
        self.params: Dict[str, np.ndarray] = {}
        self.grads: Dict[str, np.ndarray] = {}

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def output_length(self, length: int) -> int:
        return length

    def parameter_names(self) -> List[str]:
        return list(self.params)

    def __repr__(self) -> str:
        return self.__class__.__name__


# ============================================================================
# Parametrized layers
# ============================================================================


class Conv1D(Layer):
    """
    Valid 1-D convolution with stride.

    Weights have shape (kernel, in_channels, out_channels); the forward pass
    gathers strided windows into columns and does a single matmul.
    """

    def __init__(self, in_channels: int, out_channels: int, kernel: int, stride: int, rng: np.random.Generator):
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel
        self.stride = stride
        self.params["weight"] = glorot_uniform(
            (kernel, in_channels, out_channels),
            fan_in=in_channels * kernel,
            fan_out=out_channels * kernel,
            rng=rng,
        )
        self.params["bias"] = np.zeros(out_channels)
        self._columns = None
        self._input_shape = None

    def output_length(self, length: int) -> int:
        if length < self.kernel:
            raise ValueError(f"Input length {length} is shorter than kernel {self.kernel}")
        return (length - self.kernel) // self.stride + 1

    def forward(self, x: np.ndarray) -> np.ndarray:
        batch, length, _ = x.shape
        out_length = self.output_length(length)
        # (B, T-K+1, Cin, K) -> strided -> (B, T_out, K, Cin)
        windows = sliding_window_view(x, self.kernel, axis=1)[:, ::self.stride][:, :out_length]
        columns = windows.transpose(0, 1, 3, 2).reshape(batch, out_length, self.kernel * self.in_channels)

        self._columns = columns
        self._input_shape = x.shape
        weight = self.params["weight"].reshape(-1, self.out_channels)
        return columns @ weight + self.params["bias"]

    def backward(self, grad: np.ndarray) -> np.ndarray:
        batch, out_length, _ = grad.shape
        weight = self.params["weight"].reshape(-1, self.out_channels)

        self.grads["weight"] = np.tensordot(self._columns, grad, axes=([0, 1], [0, 1])).reshape(
            self.params["weight"].shape
        )
        self.grads["bias"] = grad.sum(axis=(0, 1))

        grad_columns = (grad @ weight.T).reshape(batch, out_length, self.kernel, self.in_channels)
        grad_input = np.zeros(self._input_shape)
        span = self.stride * (out_length - 1) + 1
        for k in range(self.kernel):
            grad_input[:, k:k + span:self.stride, :] += grad_columns[:, :, k, :]
        return grad_input

    def __repr__(self) -> str:
        return f"Conv1D({self.in_channels}->{self.out_channels}, k={self.kernel}, s={self.stride})"


class Dense(Layer):
    """Fully connected layer, weight shape (in_features, out_features)."""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator):
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        self.params["weight"] = glorot_uniform((in_features, out_features), in_features, out_features, rng)
        self.params["bias"] = np.zeros(out_features)
        self._input = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._input = x
        return x @ self.params["weight"] + self.params["bias"]

    def backward(self, grad: np.ndarray) -> np.ndarray:
        self.grads["weight"] = self._input.T @ grad
        self.grads["bias"] = grad.sum(axis=0)
        return grad @ self.params["weight"].T

    def __repr__(self) -> str:
        return f"Dense({self.in_features}->{self.out_features})"


# ============================================================================
# Parameter-free layers
# ============================================================================


class ReLU(Layer):
    def __init__(self):
        super().__init__()
        self._mask = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        return grad * self._mask


class Tanh(Layer):
    def __init__(self):
        super().__init__()
        self._output = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._output = np.tanh(x)
        return self._output

    def backward(self, grad: np.ndarray) -> np.ndarray:
        return grad * (1.0 - self._output ** 2)


class GlobalAvgPool(Layer):
    """Mean over the time axis: (B, T, C) -> (B, C)."""

    def __init__(self):
        super().__init__()
        self._length = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._length = x.shape[1]
        return x.mean(axis=1)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        return np.repeat(grad[:, None, :] / self._length, self._length, axis=1)


ACTIVATIONS = {"relu": ReLU, "tanh": Tanh}


# ============================================================================
# Loss
# ============================================================================


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Mean softmax cross-entropy and its gradient with respect to the logits.

    Args:
        logits: (B, C) scores
        labels: (B,) class indices

    Returns:
        (loss, grad) where grad = (softmax(logits) - onehot(labels)) / B
    """
    batch = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(log_norm - shifted[np.arange(batch), labels]))

    grad = softmax(logits)
    grad[np.arange(batch), labels] -= 1.0
    return loss, grad / batch
