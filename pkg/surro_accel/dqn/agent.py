"""Deep Q-learning over the joint action of all experts.

The joint action of n experts is one of 2**n network outputs. Bit k of the
output index (least-significant first) is expert k's action.
"""

import logging
import math
from collections.abc import Sequence

import logfire
import numpy as np

from surro_accel.callcenter.environment import Environment
from surro_accel.callcenter.policies import Policy
from surro_accel.callcenter.replication import rollout
from surro_accel.callcenter.types import ActionVector, RewardSpec
from surro_accel.constants import (
    AGENT_STREAM,
    EVALUATION_STREAM,
    SIMULATION_STREAM,
    SURROGATE_STREAM,
)
from surro_accel.dqn.constants import INIT_SUBSTREAM, POLICY_SUBSTREAM, REPLAY_SUBSTREAM
from surro_accel.dqn.replay import ReplayBuffer
from surro_accel.dqn.types import CurveEntry, DqnConfig, LearningCurve, Phase, Transition
from surro_accel.errors import DivergenceError, ShapeError
from surro_accel.neural.mlp import Mlp, backward, forward, forward_batch
from surro_accel.neural.optimizer import init_optimizer, optimizer_step
from surro_accel.neural.types import Minibatch, OptimizerState
from surro_accel.stochastic.types import RngStream

logger = logging.getLogger(__name__)


def encode_action(action: Sequence[int]) -> int:
    if any(bit not in (0, 1) for bit in action):
        raise ShapeError(f"action bits must be 0 or 1, got {list(action)}")
    return sum(int(bit) << k for k, bit in enumerate(action))


def decode_action(index: int, n_bits: int) -> ActionVector:
    if not 0 <= index < 2**n_bits:
        raise ShapeError(f"action index {index} out of range for {n_bits} experts")
    return tuple((index >> k) & 1 for k in range(n_bits))


def action_bits_of(qnet: Mlp) -> int:
    n_bits = qnet.d_out.bit_length() - 1
    if 2**n_bits != qnet.d_out:
        raise ShapeError(f"Q-network has {qnet.d_out} outputs, expected a power of two")
    return n_bits


def select_action(qnet: Mlp, obs: np.ndarray, epsilon: float, stream: RngStream) -> int:
    """Epsilon-greedy action index; greedy ties go to the lowest index."""
    if stream.generator.random() < epsilon:
        return int(stream.generator.integers(0, qnet.d_out))
    return int(np.argmax(forward(qnet, obs)))


def greedy_policy(qnet: Mlp, epsilon: float, stream: RngStream) -> Policy:
    """Wrap a Q-network as an observation -> action-vector policy."""
    n_bits = action_bits_of(qnet)

    def policy(obs: np.ndarray) -> ActionVector:
        return decode_action(select_action(qnet, obs, epsilon, stream), n_bits)

    return policy


def td_targets(batch: Sequence[Transition], target_net: Mlp, gamma: float) -> np.ndarray:
    """r + gamma * max_a' Q_target(s', a'), or r alone for terminal transitions."""
    rewards = np.array([t.reward for t in batch], dtype=float)
    done = np.array([t.done for t in batch], dtype=bool)
    next_q = forward_batch(target_net, np.stack([t.next_obs for t in batch])).max(axis=1)
    return rewards + np.where(done, 0.0, gamma * next_q)


def train_step(
    qnet: Mlp,
    target_net: Mlp,
    buffer: ReplayBuffer,
    opt: OptimizerState,
    cfg: DqnConfig,
    stream: RngStream,
) -> float | None:
    """One gradient step on a uniform minibatch.

    Only the taken action's output is regressed; every other output's target is
    its current prediction. The target network is overwritten with the online
    network every cfg.target_sync_period optimizer steps.

    Returns:
        The minibatch loss before the update, or None when the buffer holds
        fewer than cfg.minibatch transitions.
    """
    if len(buffer) < cfg.minibatch:
        return None
    batch = buffer.sample(cfg.minibatch, stream)
    inputs = np.stack([t.obs for t in batch])
    targets = forward_batch(qnet, inputs).copy()
    actions = np.array([t.action_index for t in batch])
    targets[np.arange(len(batch)), actions] = td_targets(batch, target_net, cfg.gamma)

    loss, grads = backward(qnet, Minibatch(inputs, targets), training=False)
    optimizer_step(qnet, grads, opt)
    if opt.step % cfg.target_sync_period == 0:
        target_net.load_parameters(qnet)
    return loss


class DqnAgent:
    """Online network, target network, optimizer and replay memory of one learner.

    Pretraining and fine-tuning continue the same agent, so the gradient-step
    counter and (optionally) the replay memory carry across phases.
    """

    def __init__(self, n_inputs: int, n_actions: int, cfg: DqnConfig, seed: int):
        stream = RngStream(seed, AGENT_STREAM)
        self.cfg = cfg
        self.qnet = Mlp.initialize(
            [n_inputs, *cfg.hidden, n_actions], stream.substream(INIT_SUBSTREAM)
        )
        self.target_net = self.qnet.copy()
        self.optimizer = init_optimizer(self.qnet, cfg.learning_rate)
        self.replay = ReplayBuffer(cfg.replay_capacity)
        self.policy_stream = stream.substream(POLICY_SUBSTREAM)
        self.replay_stream = stream.substream(REPLAY_SUBSTREAM)

    @classmethod
    def for_environment(cls, env: Environment, cfg: DqnConfig, seed: int) -> "DqnAgent":
        return cls(env.observation_size, env.action_count, cfg, seed)

    @property
    def gradient_steps(self) -> int:
        return self.optimizer.step

    def act(self, obs: np.ndarray) -> int:
        return select_action(self.qnet, obs, self.cfg.epsilon, self.policy_stream)

    def learn(self, transition: Transition) -> float | None:
        self.replay.push(transition)
        return train_step(
            self.qnet,
            self.target_net,
            self.replay,
            self.optimizer,
            self.cfg,
            self.replay_stream,
        )

    def reset_replay(self) -> None:
        self.replay.clear()

    def reset_optimizer(self) -> None:
        self.optimizer = init_optimizer(self.qnet, self.cfg.learning_rate)

    def policy(self) -> Policy:
        """The agent's current epsilon-greedy behaviour as a policy."""
        return greedy_policy(self.qnet, self.cfg.epsilon, self.policy_stream)


def run_episode(env: Environment, agent: DqnAgent, stream: RngStream, episode: int) -> float:
    obs = env.reset(stream)
    n_bits = env.action_bits
    total = 0.0
    for _ in range(env.horizon):
        index = agent.act(obs)
        result = env.step(decode_action(index, n_bits))
        loss = agent.learn(
            Transition(
                obs=np.asarray(obs, dtype=float),
                action_index=index,
                reward=result.reward,
                next_obs=np.asarray(result.observation, dtype=float),
                done=result.done,
            )
        )
        if loss is not None and not math.isfinite(loss):
            raise DivergenceError(episode, loss)
        total += result.reward
        obs = result.observation
        if result.done:
            break
    return total


def train(
    env: Environment,
    cfg: DqnConfig,
    reward_spec: RewardSpec,
    seed: int,
    agent: DqnAgent | None = None,
    phase: Phase = Phase.DIRECT,
    curve: LearningCurve | None = None,
) -> tuple[Mlp, LearningCurve]:
    """Train for cfg.episodes episodes against env under reward_spec.

    Episode k on a backend draws its randomness from the substream keyed by that
    backend's replication counter, so continuing a curve never replays an
    episode and a run without surrogate episodes matches direct training.

    Args:
        env: simulation or surrogate environment; its reward_spec is replaced
        cfg: hyperparameters; cfg.episodes sets the number of episodes
        reward_spec: reward applied to every step
        seed: master seed of the run
        agent: learner to continue; a fresh agent is created when omitted
        phase: label recorded on every new curve entry
        curve: curve to extend; counters continue from its last entry

    Returns:
        The online Q-network and the extended learning curve.
    """
    env.reward_spec = reward_spec
    if agent is None:
        agent = DqnAgent.for_environment(env, cfg, seed)
    if agent.qnet.d_in != env.observation_size or agent.qnet.d_out != env.action_count:
        raise ShapeError(
            f"agent network {agent.qnet.layer_dims} does not fit an environment with "
            f"{env.observation_size} observations and {env.action_count} actions"
        )

    entries = list(curve.entries) if curve is not None else []
    sim = curve.sim_replications if curve is not None else 0
    surrogate = curve.surrogate_replications if curve is not None else 0
    on_simulation = env.backend == "simulation"
    episode_streams = RngStream(seed, SIMULATION_STREAM if on_simulation else SURROGATE_STREAM)

    with logfire.span(
        "dqn training", phase=phase.value, backend=env.backend, episodes=cfg.episodes
    ):
        for _ in range(cfg.episodes):
            episode = len(entries)
            stream = episode_streams.substream(sim if on_simulation else surrogate)
            total = run_episode(env, agent, stream, episode)
            if on_simulation:
                sim += 1
            else:
                surrogate += 1
            entries.append(
                CurveEntry(
                    episode=episode,
                    total_reward=total,
                    cumulative_sim_replications=sim,
                    cumulative_surrogate_replications=surrogate,
                    phase=phase,
                )
            )
            if (episode + 1) % cfg.log_every == 0:
                logfire.info(
                    "dqn episode",
                    episode=episode,
                    total_reward=total,
                    phase=phase.value,
                    gradient_steps=agent.gradient_steps,
                )

    logger.info(
        "training phase finished",
        extra={"phase": phase.value, "episodes": cfg.episodes, "backend": env.backend},
    )
    return agent.qnet, LearningCurve(entries=entries)


@logfire.instrument("evaluate_policy", extract_args=["episodes"])
def evaluate_policy(env: Environment, qnet: Mlp, episodes: int, seed: int) -> list[float]:
    """Total reward of greedy rollouts of a frozen network, one per episode."""
    streams = RngStream(seed, EVALUATION_STREAM)
    policy = greedy_policy(qnet, 0.0, streams)
    return [
        rollout(env, policy, streams.substream(episode), episode).total_reward
        for episode in range(episodes)
    ]
