from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from surro_accel.dqn.constants import DEFAULT_LOG_EVERY, DEFAULT_TARGET_SYNC_PERIOD


class DqnConfig(BaseModel):
    """Hyperparameters of the Q-learning agent.

    Attributes:
        learning_rate: Adam step size
        replay_capacity: transitions kept in replay memory
        minibatch: transitions per gradient step
        epsilon: constant exploration rate
        gamma: discount factor
        hidden: hidden layer widths of the Q-network
        target_sync_period: gradient steps between hard target-network copies
        episodes: training episodes of a direct run
        log_every: episodes between progress records
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    learning_rate: float = Field(default=1e-4, gt=0)
    replay_capacity: int = Field(default=300, gt=0)
    minibatch: int = Field(default=5, gt=0)
    epsilon: float = Field(default=0.05, ge=0, le=1)
    gamma: float = Field(default=0.9, ge=0, lt=1)
    hidden: list[int] = Field(default_factory=lambda: [32, 32])
    target_sync_period: int = Field(default=DEFAULT_TARGET_SYNC_PERIOD, gt=0)
    episodes: int = Field(default=200, ge=0)
    log_every: int = Field(default=DEFAULT_LOG_EVERY, gt=0)

    @model_validator(mode="after")
    def check_layers(self) -> "DqnConfig":
        if any(width < 1 for width in self.hidden):
            raise ValueError("hidden widths must be positive")
        if self.minibatch > self.replay_capacity:
            raise ValueError("minibatch cannot exceed replay_capacity")
        return self


@dataclass(frozen=True, slots=True)
class Transition:
    obs: np.ndarray
    action_index: int
    reward: float
    next_obs: np.ndarray
    done: bool


class Phase(StrEnum):
    DIRECT = "direct"
    PRETRAIN = "pretrain"
    FINETUNE = "finetune"


class CurveEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    episode: int = Field(ge=0)
    total_reward: float
    cumulative_sim_replications: int = Field(ge=0)
    cumulative_surrogate_replications: int = Field(ge=0)
    phase: Phase


class LearningCurve(BaseModel):
    """Per-episode training record; episodes are numbered across phases."""

    entries: list[CurveEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def counters_nondecreasing(self) -> "LearningCurve":
        for prev, entry in zip(self.entries, self.entries[1:], strict=False):
            if (
                entry.cumulative_sim_replications < prev.cumulative_sim_replications
                or entry.cumulative_surrogate_replications
                < prev.cumulative_surrogate_replications
            ):
                raise ValueError(f"episode {entry.episode}: replication counters decreased")
        return self

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def sim_replications(self) -> int:
        return self.entries[-1].cumulative_sim_replications if self.entries else 0

    @property
    def surrogate_replications(self) -> int:
        return self.entries[-1].cumulative_surrogate_replications if self.entries else 0

    def rewards(self, phases: set[Phase] | None = None) -> list[float]:
        return [
            e.total_reward for e in self.entries if phases is None or e.phase in phases
        ]
