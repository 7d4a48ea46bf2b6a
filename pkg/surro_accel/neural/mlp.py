"""Dense ReLU network with inverted dropout and hand-written backpropagation.

Weights are stored input-major (``W[l]`` has shape ``(dims[l], dims[l + 1])``)
so a batch ``X`` of shape ``(n, d_in)`` flows through as ``X @ W + b``.
"""

from dataclasses import dataclass

import numpy as np

from surro_accel.errors import ShapeError
from surro_accel.neural.types import Gradients, Minibatch
from surro_accel.stochastic.types import RngStream


@dataclass
class Mlp:
    """Feed-forward network: rectifier on hidden layers, identity output.

    Attributes:
        layer_dims: [d_in, hidden..., d_out]
        weights: one (fan_in, fan_out) matrix per layer
        biases: one (fan_out,) vector per layer
        dropout_rate: drop probability of hidden activations while training
    """

    layer_dims: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    dropout_rate: float = 0.0

    def __post_init__(self):
        if len(self.layer_dims) < 2 or any(d < 1 for d in self.layer_dims):
            raise ShapeError(f"invalid layer dims {self.layer_dims}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        expected = list(zip(self.layer_dims[:-1], self.layer_dims[1:], strict=True))
        if [w.shape for w in self.weights] != expected or [
            b.shape for b in self.biases
        ] != [(fan_out,) for _, fan_out in expected]:
            raise ShapeError(f"parameter shapes do not match layer dims {self.layer_dims}")

    @classmethod
    def initialize(
        cls, layer_dims: list[int], stream: RngStream, dropout_rate: float = 0.0
    ) -> "Mlp":
        """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases."""
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:], strict=True):
            bound = 1.0 / np.sqrt(fan_in)
            weights.append(stream.generator.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(stream.generator.uniform(-bound, bound, size=fan_out))
        return cls(list(layer_dims), weights, biases, dropout_rate)

    @property
    def d_in(self) -> int:
        return self.layer_dims[0]

    @property
    def d_out(self) -> int:
        return self.layer_dims[-1]

    def parameters(self) -> list[np.ndarray]:
        return [a for pair in zip(self.weights, self.biases, strict=True) for a in pair]

    def copy(self) -> "Mlp":
        return Mlp(
            list(self.layer_dims),
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.dropout_rate,
        )

    def load_parameters(self, other: "Mlp") -> None:
        """Hard copy of another network's parameters into this one."""
        if other.layer_dims != self.layer_dims:
            raise ShapeError(f"cannot copy {other.layer_dims} into {self.layer_dims}")
        for dst, src in zip(self.parameters(), other.parameters(), strict=True):
            dst[...] = src


@dataclass
class _ForwardCache:
    activations: list[np.ndarray]
    pre_activations: list[np.ndarray]
    masks: list[np.ndarray | None]


def _forward(
    net: Mlp, x: np.ndarray, training: bool, stream: RngStream | None
) -> tuple[np.ndarray, _ForwardCache]:
    if x.shape[-1] != net.d_in:
        raise ShapeError(f"input has {x.shape[-1]} features, network expects {net.d_in}")
    use_dropout = training and net.dropout_rate > 0.0
    if use_dropout and stream is None:
        raise ValueError("a random stream is required for dropout while training")

    cache = _ForwardCache(activations=[x], pre_activations=[], masks=[])
    h = x
    last = len(net.weights) - 1
    for layer, (w, b) in enumerate(zip(net.weights, net.biases, strict=True)):
        z = h @ w + b
        cache.pre_activations.append(z)
        if layer == last:
            h = z
            break
        h = np.maximum(z, 0.0)
        mask = None
        if use_dropout:
            keep = 1.0 - net.dropout_rate
            mask = (stream.generator.random(h.shape) < keep) / keep
            h = h * mask
        cache.masks.append(mask)
        cache.activations.append(h)
    return h, cache


def forward(
    net: Mlp, x: np.ndarray, training: bool = False, stream: RngStream | None = None
) -> np.ndarray:
    """Network output for one input vector or a batch of row vectors."""
    out, _ = _forward(net, np.asarray(x, dtype=float), training, stream)
    return out


def forward_batch(net: Mlp, xs: np.ndarray) -> np.ndarray:
    """Deterministic outputs for an (n, d_in) batch, one row per input."""
    out, _ = _forward(net, np.atleast_2d(np.asarray(xs, dtype=float)), False, None)
    return out


def backward(
    net: Mlp, batch: Minibatch, stream: RngStream | None = None, training: bool = True
) -> tuple[float, Gradients]:
    """Mean-squared-error loss of a minibatch and its parameter gradients.

    The loss averages the squared error over outputs and over rows. When
    training with dropout the same masks are used for the forward and the
    backward pass.
    """
    if batch.targets.shape[1] != net.d_out:
        raise ShapeError(
            f"targets have {batch.targets.shape[1]} columns, network outputs {net.d_out}"
        )
    out, cache = _forward(net, batch.inputs, training, stream)
    diff = out - batch.targets
    loss = float(np.mean(diff * diff))

    grad_w: list[np.ndarray] = [np.empty(0)] * len(net.weights)
    grad_b: list[np.ndarray] = [np.empty(0)] * len(net.biases)
    delta = 2.0 * diff / diff.size
    for layer in range(len(net.weights) - 1, -1, -1):
        grad_w[layer] = cache.activations[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer == 0:
            break
        delta = delta @ net.weights[layer].T
        mask = cache.masks[layer - 1]
        if mask is not None:
            delta = delta * mask
        delta = delta * (cache.pre_activations[layer - 1] > 0.0)
    return loss, Gradients(weights=grad_w, biases=grad_b)
