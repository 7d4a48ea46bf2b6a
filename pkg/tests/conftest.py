import json
from pathlib import Path

import logfire
import numpy as np
import pytest

from surro_accel.callcenter.types import (
    CallCenterConfig,
    ContactGroupConfig,
    EpochKpis,
    EpochRecord,
    ExpertGroupConfig,
    Trajectory,
)
from surro_accel.stochastic.types import DeterministicSpec, ExponentialSpec, RngStream


@pytest.fixture(scope="session", autouse=True)
def local_logfire():
    logfire.configure(send_to_logfire=False, console=False)


@pytest.fixture
def default_config() -> CallCenterConfig:
    return CallCenterConfig()


@pytest.fixture
def short_config() -> CallCenterConfig:
    return CallCenterConfig(horizon_epochs=4)


@pytest.fixture
def single_server():
    """Factory for a one-group, one-expert call center."""

    def make(
        rate: float = 0.0,
        service=None,
        patience=None,
        tasks: int = 0,
        horizon: int = 1,
        epoch_length: float = 30.0,
        task_duration: float = 1.0,
    ) -> CallCenterConfig:
        return CallCenterConfig(
            contact_groups=[
                ContactGroupConfig(
                    arrival_rate_per_epoch=rate,
                    service=service or ExponentialSpec(rate=1.0),
                    patience=patience,
                )
            ],
            expert_groups=[ExpertGroupConfig(size=1)],
            routing=[[True]],
            epoch_length_minutes=epoch_length,
            horizon_epochs=horizon,
            backoffice_tasks_per_expert=tasks,
            backoffice_duration=DeterministicSpec(value=task_duration),
        )

    return make


def synthetic_trajectories(
    n: int, horizon: int = 16, seed: int = 0, start_id: int = 0
) -> list[Trajectory]:
    """Valid default-layout trajectories with random content."""
    rng = RngStream(seed).generator
    trajectories = []
    for r in range(start_id, start_id + n):
        records = []
        for j in range(horizon):
            obs = [*rng.integers(0, 5, 2), 5, 10, 5, int(rng.integers(0, 5)), j / horizon]
            next_obs = [*rng.integers(0, 5, 2), 4, 8, 4, int(rng.integers(0, 5)), (j + 1) / horizon]
            records.append(
                EpochRecord(
                    replication=r,
                    epoch=j,
                    obs=[float(v) for v in obs],
                    arrivals=[int(v) for v in rng.poisson(6.5, 2)],
                    action=[int(v) for v in rng.integers(0, 2, 4)],
                    kpis=EpochKpis(
                        W=rng.uniform(0, 5, 2).tolist(),
                        A=rng.uniform(0, 1, 2).tolist(),
                        U=rng.uniform(0, 1, 3).tolist(),
                        B=[int(v) for v in rng.integers(0, 10, 3)],
                    ),
                    reward=-1.0,
                    next_obs=[float(v) for v in next_obs],
                    done=j == horizon - 1,
                )
            )
        trajectories.append(Trajectory(replication=r, records=records, total_reward=-horizon))
    return trajectories


@pytest.fixture
def tiny_document() -> dict:
    """A configuration small enough to run every pipeline stage in a second."""
    return {
        "horizon_epochs": 2,
        "seed": 3,
        "dqn": {"hidden": [8], "episodes": 2, "minibatch": 2},
        "surrogate": {"hidden": [8], "epochs": 2, "minibatch": 4},
        "experiment": {
            "collect_replications": 3,
            "pretrain_surrogate_episodes": 2,
            "max_episodes": 4,
            "n_seeds": 2,
            "evaluation_episodes": 1,
        },
        "stabilization": {"window": 2},
    }


@pytest.fixture
def tiny_config_file(tmp_path: Path, tiny_document: dict) -> Path:
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(tiny_document))
    return path


@pytest.fixture
def rng() -> np.random.Generator:
    return RngStream(12345).generator
