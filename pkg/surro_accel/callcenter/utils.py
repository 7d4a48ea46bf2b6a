"""Trajectory files: JSON Lines, one EpochRecord per line."""

from collections.abc import Iterable
from itertools import groupby
from pathlib import Path

from pydantic import ValidationError

from surro_accel.callcenter.types import EpochRecord, Trajectory
from surro_accel.errors import SchemaError
from surro_accel.utils import write_atomic


def trajectories_to_jsonl(trajectories: Iterable[Trajectory]) -> str:
    return "".join(
        record.model_dump_json(by_alias=True) + "\n"
        for trajectory in trajectories
        for record in trajectory.records
    )


def write_trajectories(path: Path, trajectories: Iterable[Trajectory]) -> Path:
    return write_atomic(path, trajectories_to_jsonl(trajectories))


def read_trajectories(path: Path) -> list[Trajectory]:
    """Parse a trajectory file back into per-replication trajectories.

    Records of one replication must be contiguous and in epoch order.

    Raises:
        SchemaError: a line does not parse or the grouping is inconsistent
    """
    records: list[EpochRecord] = []
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(EpochRecord.model_validate_json(line))
        except ValidationError as e:
            raise SchemaError(f"{path}:{line_no}: {e.errors()[0]['msg']}") from e

    trajectories = []
    for replication, group in groupby(records, key=lambda r: r.replication):
        group = list(group)
        if [r.epoch for r in group] != list(range(len(group))):
            raise SchemaError(f"replication {replication}: epochs are not 0..{len(group) - 1}")
        trajectories.append(
            Trajectory(
                replication=replication,
                records=group,
                total_reward=sum(r.reward for r in group),
            )
        )
    return trajectories
