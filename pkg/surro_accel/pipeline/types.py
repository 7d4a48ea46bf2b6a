from dataclasses import dataclass
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from surro_accel.callcenter.types import RewardSpec
from surro_accel.dqn.types import LearningCurve
from surro_accel.pipeline.constants import (
    DEFAULT_BAND_FLOOR,
    DEFAULT_RELATIVE_BAND,
    DEFAULT_WINDOW,
)
from surro_accel.surrogate.types import RmseReport


class Mode(StrEnum):
    DIRECT = "direct"
    PRETRAIN_FINETUNE = "pretrain_finetune"


class ExperimentSpec(BaseModel):
    """Budgets and options of the training-strategy comparison.

    Attributes:
        mode: pretrain_finetune runs the whole chain; direct only trains on the simulation
        collect_replications: replications recorded for the surrogate
        pretrain_surrogate_episodes: surrogate episodes before fine-tuning
        max_episodes: simulation episodes of a direct run and of a fine-tuning phase
        n_seeds: seeds per comparison (seed, seed + 1, ...)
        evaluation_episodes: greedy evaluation rollouts of each final network
        finetune_reset_replay: empty replay memory before fine-tuning
        finetune_reset_optimizer: restart Adam moments before fine-tuning
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Mode = Mode.PRETRAIN_FINETUNE
    collect_replications: int = Field(default=200, gt=1)
    pretrain_surrogate_episodes: int = Field(default=200, ge=0)
    max_episodes: int = Field(default=200, gt=0)
    n_seeds: int = Field(default=5, gt=0)
    evaluation_episodes: int = Field(default=10, ge=0)
    finetune_reset_replay: bool = True
    finetune_reset_optimizer: bool = False


class StabilizationCriterion(BaseModel):
    """Moving-average band around the final level.

    When band is omitted it is relative_band * |final-window mean|, floored at
    band_floor.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    window: int = Field(default=DEFAULT_WINDOW, ge=2)
    band: float | None = Field(default=None, gt=0)
    relative_band: float = Field(default=DEFAULT_RELATIVE_BAND, gt=0)
    band_floor: float = Field(default=DEFAULT_BAND_FLOOR, gt=0)

    def band_for(self, final_mean: float) -> float:
        if self.band is not None:
            return self.band
        return max(self.relative_band * abs(final_mean), self.band_floor)


@dataclass
class SeedRun:
    """Both strategies' curves for one seed, as returned by a worker."""

    seed: int
    direct: LearningCurve
    pretrain_finetune: LearningCurve | None
    direct_evaluation: list[float]
    pretrain_finetune_evaluation: list[float]


class SeedOutcome(BaseModel):
    """Stabilization of one seed.

    Attributes:
        direct_stabilized_at: simulation episodes before the direct curve stabilizes
        pretrain_finetune_stabilized_at: fine-tuning episodes before that curve stabilizes
        direct_replications: simulation replications counted for the median
        pretrain_finetune_replications: same for the fine-tuning phase
    """

    seed: int
    direct_stabilized_at: int | None
    pretrain_finetune_stabilized_at: int | None
    direct_replications: int
    pretrain_finetune_replications: int | None
    direct_curve: str | None = None
    pretrain_finetune_curve: str | None = None
    direct_mean_reward: float | None = None
    pretrain_finetune_mean_reward: float | None = None


class ComparisonReport(BaseModel):
    """Direct training against surrogate pretraining plus fine-tuning under one reward."""

    label: str
    reward: RewardSpec
    baseline_reward: RewardSpec | None = None
    seeds: list[SeedOutcome]
    median_direct: float
    median_pretrain_finetune: float | None
    ratio: float | None
    surrogate_replications_per_seed: int
    rmse: RmseReport | None = None


class ExperimentReport(BaseModel):
    seed: int
    mode: Mode
    trajectories: str | None = None
    surrogate: str | None = None
    rmse: RmseReport | None = None
    collection_curve: str | None = None
    original: ComparisonReport
    reward_change: ComparisonReport | None = None
