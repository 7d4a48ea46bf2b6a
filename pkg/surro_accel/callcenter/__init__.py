from surro_accel.callcenter.constants import MODIFIED_REWARD, ORIGINAL_REWARD, REWARD_PRESETS
from surro_accel.callcenter.environment import Environment, SimulationEnvironment
from surro_accel.callcenter.replication import rollout, run_replication
from surro_accel.callcenter.rewards import compute_reward, terminal_reward
from surro_accel.callcenter.simulation import (
    compute_observation,
    init_state,
    sample_epoch_arrivals,
    step_epoch,
)
from surro_accel.callcenter.types import (
    CallCenterConfig,
    ContactGroupConfig,
    EpochKpis,
    EpochRecord,
    ExpertGroupConfig,
    Penalty,
    RewardSpec,
    StepResult,
    SystemState,
    Trajectory,
)

__all__ = [
    "MODIFIED_REWARD",
    "ORIGINAL_REWARD",
    "REWARD_PRESETS",
    "CallCenterConfig",
    "ContactGroupConfig",
    "Environment",
    "EpochKpis",
    "EpochRecord",
    "ExpertGroupConfig",
    "Penalty",
    "RewardSpec",
    "SimulationEnvironment",
    "StepResult",
    "SystemState",
    "Trajectory",
    "compute_observation",
    "compute_reward",
    "init_state",
    "rollout",
    "run_replication",
    "sample_epoch_arrivals",
    "step_epoch",
    "terminal_reward",
]
