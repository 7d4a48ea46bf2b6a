from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from surro_accel.errors import ShapeError

WEIGHT_FORMAT_VERSION = 1


@dataclass
class Minibatch:
    """n x d_in inputs with n x d_out regression targets."""

    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        self.targets = np.atleast_2d(np.asarray(self.targets, dtype=float))
        if self.inputs.shape[0] < 1 or self.inputs.shape[0] != self.targets.shape[0]:
            raise ShapeError(
                f"minibatch rows differ: inputs {self.inputs.shape}, targets {self.targets.shape}"
            )
        if not (np.isfinite(self.inputs).all() and np.isfinite(self.targets).all()):
            raise ShapeError("minibatch contains non-finite entries")

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass
class Gradients:
    """Loss gradients, laid out like Mlp.weights / Mlp.biases."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def arrays(self) -> list[np.ndarray]:
        return [a for pair in zip(self.weights, self.biases, strict=True) for a in pair]


@dataclass
class OptimizerState:
    """Adaptive-moment (Adam) state.

    Attributes:
        first_moment: running mean of gradients, one array per parameter
        second_moment: running mean of squared gradients, one array per parameter
        step: number of updates applied so far
    """

    learning_rate: float
    first_moment: list[np.ndarray]
    second_moment: list[np.ndarray]
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


class WeightDocument(BaseModel):
    """Portable JSON form of an Mlp."""

    format_version: Literal[1] = WEIGHT_FORMAT_VERSION
    layer_dims: list[int] = Field(min_length=2)
    weights: list[list[list[float]]]
    biases: list[list[float]]
    dropout_rate: float = Field(ge=0, lt=1)
