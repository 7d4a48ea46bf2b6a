"""Discrete-event simulation of the call center, one decision epoch at a time.

Within an epoch:

- the action fixes every expert's mode at the epoch start; work in progress
  at the boundary is never preempted
- front-office experts take the longest-waiting customer among the contact
  groups they are routed to (FIFO within a group, earliest arrival across groups)
- back-office experts start their next private task while tasks remain and the
  epoch has not ended; a started task runs to completion, possibly across the
  boundary
- a customer still waiting at arrival_time + patience abandons at exactly that time
"""

import logging
import math
from collections import deque
from collections.abc import Sequence

import numpy as np

from surro_accel.callcenter.types import (
    ActionVector,
    CallCenterConfig,
    Customer,
    CustomerStatus,
    EpochKpis,
    Expert,
    ExpertMode,
    GroupTally,
    Job,
    SystemState,
    routing_problems,
)
from surro_accel.descore.calendar import EventCalendar
from surro_accel.descore.types import Event, EventKind
from surro_accel.errors import ConfigError, EpisodeCompleteError, ShapeError
from surro_accel.stochastic.sampling import sample, sample_arrivals
from surro_accel.stochastic.types import RngStream

logger = logging.getLogger(__name__)


def init_state(config: CallCenterConfig) -> SystemState:
    """Empty queues, idle experts, full back-office piles, epoch 0.

    Raises:
        ConfigError: the routing matrix is invalid for the configured groups
    """
    problems = routing_problems(
        config.routing,
        config.n_contact,
        config.n_expert_groups,
        config.backoffice_tasks_per_expert,
    )
    if problems:
        raise ConfigError([("routing", p) for p in problems])

    experts = [
        Expert(id=i, group=g, remaining_tasks=config.backoffice_tasks_per_expert)
        for i, g in enumerate(config.expert_group_of)
    ]
    return SystemState(
        config=config,
        epoch_index=0,
        queues=[deque() for _ in range(config.n_contact)],
        experts=experts,
        calendar=EventCalendar(),
        tally=[GroupTally() for _ in range(config.n_contact)],
    )


def check_action(action: Sequence[int], n_experts: int) -> ActionVector:
    if len(action) != n_experts or any(a not in (0, 1) for a in action):
        raise ShapeError(
            f"action must have {n_experts} entries in {{0, 1}}, got {list(action)}"
        )
    return tuple(int(a) for a in action)


def sample_epoch_arrivals(config: CallCenterConfig, stream: RngStream) -> list[list[float]]:
    """Arrival times of every contact group, relative to the epoch start."""
    return [
        sample_arrivals(stream, group.arrival_rate_per_epoch, config.epoch_length_minutes)
        for group in config.contact_groups
    ]


class _EpochRun:
    """Event handlers and per-epoch accumulators for one step_epoch call."""

    def __init__(self, state: SystemState, stream: RngStream):
        self.state = state
        self.config = state.config
        self.stream = stream
        self.start = state.epoch_start
        self.end = self.start + self.config.epoch_length_minutes
        n = self.config.n_contact
        self.wait_ended = [0] * n
        self.wait_sum = [0.0] * n
        self.abandoned = [0] * n

    def run(self, arrivals: Sequence[Sequence[float]]) -> EpochKpis:
        calendar = self.state.calendar
        for k, times in enumerate(arrivals):
            for t in times:
                calendar.schedule(Event(self.start + t, EventKind.ARRIVAL, target=k))
        calendar.schedule(Event(self.end, EventKind.EPOCH_BOUNDARY))

        for expert in self.state.experts:
            if not expert.busy:
                self.dispatch(expert, self.start)

        while (event := calendar.pop_next()) is not None:
            now = event.time
            match event.kind:
                case EventKind.EPOCH_BOUNDARY:
                    break
                case EventKind.ARRIVAL:
                    self.on_arrival(event.target, now)
                case EventKind.ABANDONMENT:
                    self.on_abandonment(event.target, now)
                case EventKind.SERVICE_COMPLETION | EventKind.BACKOFFICE_COMPLETION:
                    self.on_completion(self.state.experts[event.target], now)

        for expert in self.state.experts:
            if expert.busy:
                expert.busy_time_this_epoch += self.end - max(expert.job_started_at, self.start)
        return self.kpis()

    def on_arrival(self, group: int, now: float) -> None:
        state = self.state
        spec = self.config.contact_groups[group]
        patience = math.inf if spec.patience is None else sample(spec.patience, self.stream)
        customer = Customer(
            id=len(state.customers),
            contact_group=group,
            arrival_time=now,
            patience=patience,
            service_demand=sample(spec.service, self.stream),
        )
        state.customers.append(customer)
        state.queues[group].append(customer)
        state.tally[group].arrived += 1
        if math.isfinite(patience):
            customer.abandonment = state.calendar.schedule(
                Event(now + patience, EventKind.ABANDONMENT, target=customer.id)
            )

        # an idle front-office expert implies its eligible queues were empty
        for expert in state.experts:
            if (
                not expert.busy
                and expert.mode is ExpertMode.FRONT_OFFICE
                and self.config.routing[expert.group][group]
            ):
                self.start_service(expert, customer, now)
                return

    def on_abandonment(self, customer_id: int, now: float) -> None:
        customer = self.state.customers[customer_id]
        if customer.status is not CustomerStatus.WAITING:
            return
        group = customer.contact_group
        self.state.queues[group].remove(customer)
        customer.status = CustomerStatus.ABANDONED
        customer.wait_ended_at = customer.arrival_time + customer.patience
        customer.abandonment = None
        self.wait_ended[group] += 1
        self.wait_sum[group] += customer.patience
        self.abandoned[group] += 1
        self.state.tally[group].abandoned += 1

    def on_completion(self, expert: Expert, now: float) -> None:
        expert.busy_time_this_epoch += now - max(expert.job_started_at, self.start)
        if expert.job is Job.CALL:
            customer = self.state.customers[expert.customer_id]
            customer.status = CustomerStatus.SERVED
            self.state.tally[customer.contact_group].served += 1
        else:
            expert.remaining_tasks -= 1
        expert.job = None
        expert.busy_until = None
        expert.customer_id = None
        self.dispatch(expert, now)

    def dispatch(self, expert: Expert, now: float) -> None:
        """Give an idle expert its next piece of work, if any."""
        if expert.mode is ExpertMode.FRONT_OFFICE:
            eligible = self.config.routing[expert.group]
            heads = [
                queue[0]
                for k, queue in enumerate(self.state.queues)
                if eligible[k] and queue
            ]
            if heads:
                customer = min(heads, key=lambda c: (c.arrival_time, c.id))
                self.start_service(expert, customer, now)
        elif expert.remaining_tasks > 0 and now < self.end:
            # back-office durations are configured in epochs
            duration = (
                sample(self.config.backoffice_duration, self.stream)
                * self.config.epoch_length_minutes
            )
            self.start_job(expert, Job.TASK, now, duration)

    def start_service(self, expert: Expert, customer: Customer, now: float) -> None:
        state = self.state
        group = customer.contact_group
        queue = state.queues[group]
        if queue and queue[0] is customer:
            queue.popleft()
        else:
            queue.remove(customer)
        if customer.abandonment is not None:
            state.calendar.discard(customer.abandonment)
            customer.abandonment = None
        customer.status = CustomerStatus.IN_SERVICE
        customer.wait_ended_at = now
        wait = now - customer.arrival_time
        self.wait_ended[group] += 1
        self.wait_sum[group] += wait
        state.tally[group].started += 1
        state.tally[group].total_wait += wait
        expert.customer_id = customer.id
        self.start_job(expert, Job.CALL, now, customer.service_demand)

    def start_job(self, expert: Expert, job: Job, now: float, duration: float) -> None:
        expert.job = job
        expert.job_started_at = now
        expert.busy_until = now + duration
        kind = (
            EventKind.SERVICE_COMPLETION if job is Job.CALL else EventKind.BACKOFFICE_COMPLETION
        )
        self.state.calendar.schedule(Event(expert.busy_until, kind, target=expert.id))

    def kpis(self) -> EpochKpis:
        config = self.config
        waiting = [
            self.wait_sum[k] / self.wait_ended[k] if self.wait_ended[k] else 0.0
            for k in range(config.n_contact)
        ]
        abandonment = [
            self.abandoned[k] / self.wait_ended[k] if self.wait_ended[k] else 0.0
            for k in range(config.n_contact)
        ]
        busy = [0.0] * config.n_expert_groups
        backlog = [0] * config.n_expert_groups
        for expert in self.state.experts:
            busy[expert.group] += expert.busy_time_this_epoch
            backlog[expert.group] += expert.remaining_tasks
        utilization = [
            min(1.0, max(0.0, busy[g] / (config.epoch_length_minutes * group.size)))
            for g, group in enumerate(config.expert_groups)
        ]
        return EpochKpis(W=waiting, A=abandonment, U=utilization, B=backlog)


def step_epoch(
    state: SystemState,
    action: Sequence[int],
    stream: RngStream,
    arrivals: Sequence[Sequence[float]] | None = None,
) -> tuple[EpochKpis, SystemState]:
    """Simulate one epoch from a boundary state.

    The state is advanced in place and returned together with the epoch KPIs.

    Args:
        state: boundary state, epoch_index < horizon
        action: one bit per expert, 0 = front office, 1 = back office
        stream: randomness for arrivals, customer attributes and task durations
        arrivals: explicit arrival times per contact group, relative to the
            epoch start; sampled from the configured rates when omitted

    Raises:
        EpisodeCompleteError: the state is already at the horizon
        ShapeError: malformed action or arrivals
    """
    config = state.config
    if state.epoch_index >= config.horizon_epochs:
        raise EpisodeCompleteError(
            f"epoch {state.epoch_index} is at the horizon of {config.horizon_epochs} epochs"
        )
    action = check_action(action, len(state.experts))
    if arrivals is None:
        arrivals = sample_epoch_arrivals(config, stream)
    elif len(arrivals) != config.n_contact or any(
        not 0 <= t < config.epoch_length_minutes for times in arrivals for t in times
    ):
        raise ShapeError("arrivals need one list per contact group with times inside the epoch")

    for expert, bit in zip(state.experts, action, strict=True):
        expert.mode = ExpertMode(bit)
        expert.busy_time_this_epoch = 0.0

    kpis = _EpochRun(state, stream).run(arrivals)
    state.epoch_index += 1
    return kpis, state


def compute_observation(state: SystemState) -> np.ndarray:
    """Queue lengths, back-office backlog per expert group, busy experts, j / T."""
    config = state.config
    backlog = [0] * config.n_expert_groups
    for expert in state.experts:
        backlog[expert.group] += expert.remaining_tasks
    return np.array(
        [
            *(len(queue) for queue in state.queues),
            *backlog,
            sum(1 for expert in state.experts if expert.busy),
            state.epoch_index / config.horizon_epochs,
        ],
        dtype=float,
    )
