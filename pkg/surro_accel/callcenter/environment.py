"""Environment contract shared by the simulation and the surrogate.

A DQN trainer only ever talks to an Environment, so the same training loop runs
against either backend. The reward spec is a plain attribute: swapping it
changes rewards without touching the dynamics.
"""

from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np

from surro_accel.callcenter.rewards import compute_reward, terminal_reward
from surro_accel.callcenter.simulation import (
    compute_observation,
    init_state,
    sample_epoch_arrivals,
    step_epoch,
)
from surro_accel.callcenter.types import (
    ActionVector,
    Backend,
    CallCenterConfig,
    RewardSpec,
    StepResult,
    SystemState,
)
from surro_accel.errors import ModelStateError
from surro_accel.stochastic.types import RngStream


class Environment(ABC):
    """Episodic environment with a fixed horizon and binary per-expert actions.

    Attributes:
        backend: which model produces the transitions
        reward_spec: reward applied to each step's KPIs
        horizon: number of steps per episode
        observation_size: length of the observation vector
        action_bits: number of binary action components (one per expert)
    """

    backend: ClassVar[Backend]
    reward_spec: RewardSpec
    horizon: int
    observation_size: int
    action_bits: int

    @property
    def action_count(self) -> int:
        return 2**self.action_bits

    @abstractmethod
    def reset(self, stream: RngStream) -> np.ndarray: ...

    @abstractmethod
    def step(self, action: ActionVector) -> StepResult: ...

    @abstractmethod
    def observe(self) -> np.ndarray: ...


class SimulationEnvironment(Environment):
    """The discrete-event simulation behind the Environment contract."""

    backend = "simulation"

    def __init__(self, config: CallCenterConfig, reward_spec: RewardSpec):
        self.config = config
        self.reward_spec = reward_spec
        self.horizon = config.horizon_epochs
        self.observation_size = config.observation_size
        self.action_bits = config.n_experts
        self._state: SystemState | None = None
        self._stream: RngStream | None = None

    @property
    def state(self) -> SystemState:
        if self._state is None:
            raise ModelStateError("environment has not been reset")
        return self._state

    def reset(self, stream: RngStream) -> np.ndarray:
        self._state = init_state(self.config)
        self._stream = stream
        return compute_observation(self._state)

    def step(self, action: ActionVector) -> StepResult:
        state = self.state
        arrivals = sample_epoch_arrivals(self.config, self._stream)
        kpis, state = step_epoch(state, action, self._stream, arrivals)
        done = state.epoch_index >= self.horizon
        reward = compute_reward(kpis, self.reward_spec)
        if done:
            reward += terminal_reward(kpis, self.reward_spec)
        return StepResult(
            observation=compute_observation(state),
            reward=reward,
            done=done,
            kpis=kpis,
            arrivals=[len(times) for times in arrivals],
        )

    def observe(self) -> np.ndarray:
        return compute_observation(self.state)
