from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum, StrEnum
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from surro_accel.descore.calendar import EventCalendar
from surro_accel.descore.types import Event
from surro_accel.stochastic.types import (
    DistributionSpec,
    GammaSpec,
    InputModels,
    LognormalSpec,
)

type ActionVector = tuple[int, ...]
type Backend = Literal["simulation", "surrogate"]


class ContactGroupConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    arrival_rate_per_epoch: float = Field(ge=0)
    service: DistributionSpec
    # None means customers of this group never abandon
    patience: DistributionSpec | None


class ExpertGroupConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    size: int = Field(gt=0)


def _default_contact_groups() -> list[ContactGroupConfig]:
    return [
        ContactGroupConfig(
            arrival_rate_per_epoch=7.0,
            service=GammaSpec(shape=4.0, scale=1.0),
            patience=GammaSpec(shape=5.0, scale=0.9),
        ),
        ContactGroupConfig(
            arrival_rate_per_epoch=6.0,
            service=GammaSpec(shape=4.0, scale=1.5),
            patience=GammaSpec(shape=2.0, scale=5.0),
        ),
    ]


def _default_expert_groups() -> list[ExpertGroupConfig]:
    return [ExpertGroupConfig(size=1), ExpertGroupConfig(size=2), ExpertGroupConfig(size=1)]


def _default_routing() -> list[list[bool]]:
    return [[True, False], [True, True], [False, True]]


def routing_problems(
    routing: list[list[bool]],
    n_contact: int,
    n_expert: int,
    backoffice_tasks_per_expert: int,
) -> list[str]:
    """Describe every way a routing matrix (expert group x contact group) is invalid."""
    if len(routing) != n_expert or any(len(row) != n_contact for row in routing):
        return [f"routing must be a {n_expert}x{n_contact} matrix (expert group x contact group)"]
    problems = [
        f"routing: contact group {k} is not served by any expert group"
        for k in range(n_contact)
        if not any(row[k] for row in routing)
    ]
    if backoffice_tasks_per_expert == 0:
        problems.extend(
            f"routing: expert group {g} serves no contact group and has no back-office tasks"
            for g, row in enumerate(routing)
            if not any(row)
        )
    return problems


class CallCenterConfig(BaseModel):
    """Structure and input models of the simulated call center.

    Defaults reproduce the reference two-contact-group, three-expert-group
    setting with one minute as the time unit and 30-minute epochs. Service and
    patience times are in minutes; backoffice_duration is in epochs.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    contact_groups: list[ContactGroupConfig] = Field(
        default_factory=_default_contact_groups, min_length=1
    )
    expert_groups: list[ExpertGroupConfig] = Field(
        default_factory=_default_expert_groups, min_length=1
    )
    routing: list[list[bool]] = Field(default_factory=_default_routing)
    epoch_length_minutes: float = Field(default=30.0, gt=0)
    horizon_epochs: int = Field(default=16, gt=0)
    backoffice_tasks_per_expert: int = Field(default=5, ge=0)
    backoffice_duration: DistributionSpec = Field(
        default_factory=lambda: LognormalSpec.model_validate({"mean": 1.7, "variance": 1.7})
    )

    @model_validator(mode="after")
    def check_routing(self) -> "CallCenterConfig":
        problems = routing_problems(
            self.routing,
            len(self.contact_groups),
            len(self.expert_groups),
            self.backoffice_tasks_per_expert,
        )
        if problems:
            raise ValueError("; ".join(problems))
        return self

    @property
    def n_contact(self) -> int:
        return len(self.contact_groups)

    @property
    def n_expert_groups(self) -> int:
        return len(self.expert_groups)

    @property
    def n_experts(self) -> int:
        return sum(group.size for group in self.expert_groups)

    @property
    def expert_group_of(self) -> list[int]:
        """Expert group index of every expert, in expert-id order."""
        return [g for g, group in enumerate(self.expert_groups) for _ in range(group.size)]

    @property
    def observation_size(self) -> int:
        return self.n_contact + self.n_expert_groups + 2

    def input_models(self) -> InputModels:
        return InputModels(
            arrival_rate_per_epoch=[g.arrival_rate_per_epoch for g in self.contact_groups],
            service=[g.service for g in self.contact_groups],
            patience=[g.patience for g in self.contact_groups],
            backoffice_duration=self.backoffice_duration,
        )


class Penalty(BaseModel):
    """One indicator term: ``penalty`` applies when the metric exceeds ``threshold``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    threshold: float
    penalty: float = Field(le=0)


PenaltyList = list[Penalty]


class RewardSpec(BaseModel):
    """Piecewise-indicator reward over the epoch KPIs.

    Attributes:
        waiting: per contact group, penalties on the average waiting time (minutes)
        abandonment: per contact group, penalties on the abandonment rate
        utilization: per expert group, penalties on utilization
        terminal_per_task: applied per remaining back-office task at the horizon
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    waiting: list[PenaltyList]
    abandonment: list[PenaltyList]
    utilization: list[PenaltyList]
    terminal_per_task: float = Field(le=0)

    @model_validator(mode="after")
    def thresholds_nondecreasing(self) -> "RewardSpec":
        for name in ("waiting", "abandonment", "utilization"):
            for index, penalties in enumerate(getattr(self, name)):
                thresholds = [p.threshold for p in penalties]
                if thresholds != sorted(thresholds):
                    raise ValueError(f"{name}[{index}]: thresholds must be nondecreasing")
        return self


class EpochKpis(BaseModel):
    """KPI vectors of one epoch.

    Attributes:
        waiting: W, average wait (minutes) of customers whose wait ended this epoch
        abandonment: A, abandoned / wait-ended this epoch, per contact group
        utilization: U, busy share per expert group
        backoffice: B, remaining back-office tasks per expert group at the boundary
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    waiting: list[Annotated[float, Field(ge=0)]] = Field(alias="W")
    abandonment: list[Annotated[float, Field(ge=0, le=1)]] = Field(alias="A")
    utilization: list[Annotated[float, Field(ge=0, le=1)]] = Field(alias="U")
    backoffice: list[Annotated[int, Field(ge=0)]] = Field(alias="B")

    def as_vector(self) -> list[float]:
        return [*self.waiting, *self.abandonment, *self.utilization, *map(float, self.backoffice)]


class EpochRecord(BaseModel):
    """One line of a trajectory file."""

    model_config = ConfigDict(frozen=True)

    replication: int = Field(ge=0)
    epoch: int = Field(ge=0)
    obs: list[float]
    arrivals: list[int] | None
    action: list[int]
    kpis: EpochKpis
    reward: float
    next_obs: list[float]
    done: bool


class Trajectory(BaseModel):
    replication: int = Field(ge=0)
    records: list[EpochRecord]
    total_reward: float


class CustomerStatus(StrEnum):
    WAITING = "waiting"
    IN_SERVICE = "in_service"
    SERVED = "served"
    ABANDONED = "abandoned"


class ExpertMode(IntEnum):
    FRONT_OFFICE = 0
    BACK_OFFICE = 1


class Job(StrEnum):
    CALL = "call"
    TASK = "task"


@dataclass(slots=True, eq=False)
class Customer:
    id: int
    contact_group: int
    arrival_time: float
    patience: float
    service_demand: float
    status: CustomerStatus = CustomerStatus.WAITING
    wait_ended_at: float | None = None
    abandonment: Event | None = None

    @property
    def wait(self) -> float | None:
        if self.status is CustomerStatus.ABANDONED:
            return self.patience
        if self.wait_ended_at is None:
            return None
        return self.wait_ended_at - self.arrival_time


@dataclass(slots=True, eq=False)
class Expert:
    id: int
    group: int
    remaining_tasks: int
    mode: ExpertMode = ExpertMode.FRONT_OFFICE
    busy_until: float | None = None
    job: Job | None = None
    job_started_at: float = 0.0
    customer_id: int | None = None
    busy_time_this_epoch: float = 0.0

    @property
    def busy(self) -> bool:
        return self.job is not None


@dataclass(slots=True)
class GroupTally:
    """Cumulative counters of one contact group over a replication."""

    arrived: int = 0
    started: int = 0
    served: int = 0
    abandoned: int = 0
    total_wait: float = 0.0


@dataclass(eq=False)
class SystemState:
    """Full call-center state at an epoch boundary.

    The calendar keeps events that cross the boundary (service and back-office
    completions, pending abandonments), which is the state carried from one
    epoch into the next.
    """

    config: CallCenterConfig
    epoch_index: int
    queues: list[deque[Customer]]
    experts: list[Expert]
    calendar: EventCalendar
    customers: list[Customer] = field(default_factory=list)
    tally: list[GroupTally] = field(default_factory=list)

    @property
    def carried_in_service(self) -> list[Expert]:
        return [expert for expert in self.experts if expert.busy]

    @property
    def epoch_start(self) -> float:
        return self.epoch_index * self.config.epoch_length_minutes


@dataclass(slots=True)
class StepResult:
    """What an environment step hands back to the agent."""

    observation: np.ndarray
    reward: float
    done: bool
    kpis: EpochKpis
    arrivals: list[int]
