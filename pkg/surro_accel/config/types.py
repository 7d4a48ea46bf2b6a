from typing import Self

from pydantic import Field, field_validator, model_validator

from surro_accel.callcenter.constants import REWARD_PRESETS
from surro_accel.callcenter.types import CallCenterConfig, RewardSpec
from surro_accel.dqn.types import DqnConfig
from surro_accel.pipeline.types import ExperimentSpec, StabilizationCriterion
from surro_accel.stochastic.types import U64_MAX
from surro_accel.surrogate.types import SurrogateConfig


class ExperimentDocument(CallCenterConfig):
    """A complete run configuration: the call center plus everything trained on it.

    The call-center fields sit at the top level of the document. reward and
    new_reward are either full reward specs or preset names ("original",
    "modified").
    """

    seed: int = Field(default=0, ge=0, le=U64_MAX)
    reward: RewardSpec | str = "original"
    new_reward: RewardSpec | str | None = None
    dqn: DqnConfig = Field(default_factory=DqnConfig)
    surrogate: SurrogateConfig = Field(default_factory=SurrogateConfig)
    experiment: ExperimentSpec = Field(default_factory=ExperimentSpec)
    stabilization: StabilizationCriterion = Field(default_factory=StabilizationCriterion)

    @field_validator("reward", "new_reward")
    @classmethod
    def known_preset(cls, value: RewardSpec | str | None) -> RewardSpec | str | None:
        if isinstance(value, str) and value not in REWARD_PRESETS:
            raise ValueError(
                f"unknown reward preset {value!r}, expected one of {sorted(REWARD_PRESETS)}"
            )
        return value

    @model_validator(mode="after")
    def check_document(self) -> Self:
        problems = []
        for name in ("reward", "new_reward"):
            spec = self._resolve(getattr(self, name))
            if spec is None:
                continue
            for kpi, expected in (
                ("waiting", self.n_contact),
                ("abandonment", self.n_contact),
                ("utilization", self.n_expert_groups),
            ):
                if len(getattr(spec, kpi)) != expected:
                    problems.append(f"{name}.{kpi}: expected {expected} penalty lists")
        window = self.stabilization.window
        if self.experiment.max_episodes < 2 * window:
            problems.append(
                f"experiment.max_episodes: needs at least {2 * window} episodes "
                "for the stabilization window"
            )
        if self.seed + self.experiment.n_seeds - 1 > U64_MAX:
            problems.append("seed: seed + n_seeds - 1 exceeds 64 bits")
        if problems:
            raise ValueError("; ".join(problems))
        return self

    @staticmethod
    def _resolve(value: RewardSpec | str | None) -> RewardSpec | None:
        if isinstance(value, str):
            return REWARD_PRESETS[value]
        return value

    def reward_spec(self) -> RewardSpec:
        return self._resolve(self.reward)

    def new_reward_spec(self) -> RewardSpec | None:
        return self._resolve(self.new_reward)

    def call_center(self) -> CallCenterConfig:
        return CallCenterConfig.model_validate(
            self.model_dump(include=set(CallCenterConfig.model_fields))
        )

    def seeds(self) -> list[int]:
        return [self.seed + i for i in range(self.experiment.n_seeds)]

    def resolved(self) -> "ExperimentDocument":
        """Copy with reward presets expanded to full specs."""
        return self.model_copy(
            update={"reward": self.reward_spec(), "new_reward": self.new_reward_spec()}
        )
