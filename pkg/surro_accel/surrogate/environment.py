import numpy as np

from surro_accel.callcenter.environment import Environment
from surro_accel.callcenter.rewards import compute_reward, terminal_reward
from surro_accel.callcenter.types import ActionVector, RewardSpec, StepResult
from surro_accel.errors import EpisodeCompleteError, ModelStateError
from surro_accel.stochastic.sampling import sample_arrival_counts
from surro_accel.stochastic.types import RngStream
from surro_accel.surrogate.model import surrogate_step
from surro_accel.surrogate.types import SurrogateModel


class SurrogateEnvironment(Environment):
    """A trained surrogate behind the Environment contract.

    Rewards are computed from predicted KPIs with the current reward_spec, so
    a reward change needs no re-fit. The time feature of every observation is
    set exactly to epoch / horizon rather than predicted.
    """

    backend = "surrogate"

    def __init__(self, model: SurrogateModel, reward_spec: RewardSpec, horizon: int | None = None):
        model.check_trained()
        self.model = model
        self.reward_spec = reward_spec
        self.horizon = model.horizon if horizon is None else horizon
        self.observation_size = model.layout.observation_size
        self.action_bits = model.layout.n_experts
        self._obs: np.ndarray | None = None
        self._epoch = 0
        self._stream: RngStream | None = None

    def reset(self, stream: RngStream) -> np.ndarray:
        self._obs = np.array(self.model.initial_observation, dtype=float)
        self._obs[-1] = 0.0
        self._epoch = 0
        self._stream = stream
        return self._obs.copy()

    def step(self, action: ActionVector) -> StepResult:
        obs = self.observe()
        if self._epoch >= self.horizon:
            raise EpisodeCompleteError(f"surrogate episode already ran {self.horizon} epochs")
        arrivals = sample_arrival_counts(self.model.input_models, self._stream)
        kpis, next_obs = surrogate_step(self.model, obs, action, self._stream, arrivals)
        self._epoch += 1
        next_obs[-1] = self._epoch / self.horizon
        self._obs = next_obs
        done = self._epoch >= self.horizon
        reward = compute_reward(kpis, self.reward_spec)
        if done:
            reward += terminal_reward(kpis, self.reward_spec)
        return StepResult(
            observation=next_obs.copy(),
            reward=reward,
            done=done,
            kpis=kpis,
            arrivals=list(arrivals),
        )

    def observe(self) -> np.ndarray:
        if self._obs is None:
            raise ModelStateError("environment has not been reset")
        return self._obs.copy()


def surrogate_environment(
    model: SurrogateModel, reward_spec: RewardSpec, horizon: int | None = None
) -> SurrogateEnvironment:
    return SurrogateEnvironment(model, reward_spec, horizon)
