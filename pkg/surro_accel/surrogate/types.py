from dataclasses import dataclass
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from surro_accel.errors import ModelStateError
from surro_accel.neural.mlp import Mlp
from surro_accel.neural.types import WeightDocument
from surro_accel.stochastic.types import InputModels
from surro_accel.surrogate.constants import DEFAULT_HOLDOUT_FRACTION, SURROGATE_FORMAT_VERSION

NonNegative = Annotated[float, Field(ge=0)]


class SurrogateConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    hidden: list[Annotated[int, Field(gt=0)]] = Field(default_factory=lambda: [64, 64])
    dropout_rate: float = Field(default=0.1, ge=0, lt=1)
    epochs: int = Field(default=200, gt=0)
    minibatch: int = Field(default=32, gt=0)
    learning_rate: float = Field(default=1e-3, gt=0)
    holdout_fraction: float = Field(default=DEFAULT_HOLDOUT_FRACTION, gt=0, lt=1)
    log_every: int = Field(default=20, gt=0)


class SurrogateLayout(BaseModel):
    """Column layout of surrogate rows.

    Inputs are the observation, one action bit per expert and the next epoch's
    arrival count per contact group. Targets are the next observation followed
    by the KPI groups W, A, U and B.
    """

    model_config = ConfigDict(frozen=True)

    n_contact: int = Field(gt=0)
    n_expert_groups: int = Field(gt=0)
    n_experts: int = Field(gt=0)

    @property
    def observation_size(self) -> int:
        return self.n_contact + self.n_expert_groups + 2

    @property
    def input_size(self) -> int:
        return self.observation_size + self.n_experts + self.n_contact

    @property
    def target_size(self) -> int:
        return self.observation_size + 2 * self.n_contact + 2 * self.n_expert_groups

    def target_slices(self) -> dict[str, slice]:
        """Target columns of every metric group, keyed like RmseReport fields."""
        bounds = {}
        start = 0
        for name, width in (
            ("next_state", self.observation_size),
            ("waiting", self.n_contact),
            ("abandonment", self.n_contact),
            ("utilization", self.n_expert_groups),
            ("backoffice", self.n_expert_groups),
        ):
            bounds[name] = slice(start, start + width)
            start += width
        return bounds


class Normalization(BaseModel):
    """Per-column standardization of surrogate inputs and targets.

    Zero-variance columns get std 1 and are flagged in *_constant.
    """

    input_mean: list[float]
    input_std: list[Annotated[float, Field(gt=0)]]
    input_constant: list[bool]
    target_mean: list[float]
    target_std: list[Annotated[float, Field(gt=0)]]
    target_constant: list[bool]

    @classmethod
    def fit(cls, inputs: np.ndarray, targets: np.ndarray) -> "Normalization":
        in_mean, in_std, in_const = _column_stats(inputs)
        out_mean, out_std, out_const = _column_stats(targets)
        return cls(
            input_mean=in_mean,
            input_std=in_std,
            input_constant=in_const,
            target_mean=out_mean,
            target_std=out_std,
            target_constant=out_const,
        )

    def standardize_inputs(self, x: np.ndarray) -> np.ndarray:
        return (x - np.asarray(self.input_mean)) / np.asarray(self.input_std)

    def standardize_targets(self, y: np.ndarray) -> np.ndarray:
        return (y - np.asarray(self.target_mean)) / np.asarray(self.target_std)

    def destandardize_targets(self, z: np.ndarray) -> np.ndarray:
        return z * np.asarray(self.target_std) + np.asarray(self.target_mean)


def _column_stats(a: np.ndarray) -> tuple[list[float], list[float], list[bool]]:
    mean = a.mean(axis=0)
    std = a.std(axis=0)
    constant = ~(std > 0)
    return mean.tolist(), np.where(constant, 1.0, std).tolist(), constant.tolist()


@dataclass
class SurrogateDataset:
    """Surrogate rows with the replication each row came from."""

    inputs: np.ndarray
    targets: np.ndarray
    replications: np.ndarray
    layout: SurrogateLayout

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def arrival_counts(self) -> np.ndarray:
        return self.inputs[:, self.layout.observation_size + self.layout.n_experts :]


@dataclass
class SurrogateSplit:
    train: SurrogateDataset
    holdout: SurrogateDataset

    @property
    def layout(self) -> SurrogateLayout:
        return self.train.layout


class RmseReport(BaseModel):
    """Holdout RMSE in original units, one entry per target column."""

    waiting: list[NonNegative]
    abandonment: list[NonNegative]
    utilization: list[NonNegative]
    backoffice: list[NonNegative]
    next_state: list[NonNegative]

    def worst(self) -> dict[str, float]:
        return {
            name: max(values, default=0.0)
            for name, values in self.model_dump().items()
        }


@dataclass
class SurrogateModel:
    """A trained transition surrogate and everything needed to sample from it.

    Attributes:
        net: deterministic network over standardized rows
        normalization: input and target standardization
        input_models: fitted exogenous inputs; arrival counts are drawn from these
        layout: row layout
        initial_observation: observation of the empty system at epoch 0
        horizon: epochs per episode of the call center the data came from
        epochs_trained: passes over the training split, 0 for an untrained model
    """

    net: Mlp
    normalization: Normalization
    input_models: InputModels
    layout: SurrogateLayout
    initial_observation: list[float]
    horizon: int
    epochs_trained: int = 0

    def check_trained(self) -> None:
        if self.epochs_trained < 1:
            raise ModelStateError("surrogate model has not been trained")


class SurrogateDocument(BaseModel):
    format_version: Literal[1] = SURROGATE_FORMAT_VERSION
    weights: WeightDocument
    normalization: Normalization
    input_models: InputModels
    layout: SurrogateLayout
    initial_observation: list[float]
    horizon: int = Field(gt=0)
    epochs_trained: int = Field(ge=0)
