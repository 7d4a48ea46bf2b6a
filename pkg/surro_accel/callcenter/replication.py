"""Full-day rollouts of a policy against an environment."""

import logging

import logfire

from surro_accel.callcenter.environment import Environment, SimulationEnvironment
from surro_accel.callcenter.policies import Policy
from surro_accel.callcenter.types import (
    CallCenterConfig,
    EpochRecord,
    RewardSpec,
    Trajectory,
)
from surro_accel.stochastic.types import RngStream

logger = logging.getLogger(__name__)


def rollout(
    env: Environment, policy: Policy, stream: RngStream, replication: int = 0
) -> Trajectory:
    """Run one full episode of env under policy and record every epoch."""
    obs = env.reset(stream)
    records: list[EpochRecord] = []
    for epoch in range(env.horizon):
        action = policy(obs)
        result = env.step(action)
        records.append(
            EpochRecord(
                replication=replication,
                epoch=epoch,
                obs=obs.tolist(),
                arrivals=result.arrivals,
                action=list(action),
                kpis=result.kpis,
                reward=result.reward,
                next_obs=result.observation.tolist(),
                done=result.done,
            )
        )
        obs = result.observation
    return Trajectory(
        replication=replication,
        records=records,
        total_reward=sum(r.reward for r in records),
    )


@logfire.instrument("run_replication", extract_args=["replication"])
def run_replication(
    config: CallCenterConfig,
    reward_spec: RewardSpec,
    policy: Policy,
    stream: RngStream,
    replication: int = 0,
) -> Trajectory:
    """Simulate epochs 0..T-1 under policy; the last reward includes the terminal penalty."""
    trajectory = rollout(SimulationEnvironment(config, reward_spec), policy, stream, replication)
    logger.debug(
        "replication finished",
        extra={"replication": replication, "total_reward": trajectory.total_reward},
    )
    return trajectory
