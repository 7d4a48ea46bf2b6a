"""Call-center simulation, a DQN staffing agent and a neural surrogate that
accelerates its training."""

__version__ = "0.1.0"

from surro_accel.callcenter import (
    CallCenterConfig,
    RewardSpec,
    SimulationEnvironment,
    run_replication,
    step_epoch,
)
from surro_accel.config import ExperimentDocument, load_config
from surro_accel.pipeline import run_experiment

__all__ = [
    "CallCenterConfig",
    "ExperimentDocument",
    "RewardSpec",
    "SimulationEnvironment",
    "__version__",
    "load_config",
    "run_experiment",
    "run_replication",
    "step_epoch",
]
