"""Surrogate training rows built from recorded trajectories.

Each recorded epoch gives one row. The input row is the observation, one
action bit per expert and the arrival count per contact group. The target row
is the next observation followed by the epoch KPIs. Replications are split
whole into train and holdout, so no episode leaks across the split.
"""

import logging
from collections import Counter
from collections.abc import Sequence

import numpy as np

from surro_accel.callcenter.types import EpochRecord, Trajectory
from surro_accel.errors import InsufficientDataError, SchemaError
from surro_accel.stochastic.types import RngStream
from surro_accel.surrogate.constants import DEFAULT_HOLDOUT_FRACTION
from surro_accel.surrogate.types import SurrogateDataset, SurrogateLayout, SurrogateSplit

logger = logging.getLogger(__name__)


def layout_of(record: EpochRecord) -> SurrogateLayout:
    return SurrogateLayout(
        n_contact=len(record.kpis.waiting),
        n_expert_groups=len(record.kpis.utilization),
        n_experts=len(record.action),
    )


def record_row(record: EpochRecord, layout: SurrogateLayout) -> tuple[list[float], list[float]]:
    """(input, target) of one recorded epoch."""
    if record.arrivals is None:
        raise SchemaError(
            f"replication {record.replication}, epoch {record.epoch}: arrival counts are missing"
        )
    if (
        len(record.obs) != layout.observation_size
        or len(record.next_obs) != layout.observation_size
        or len(record.action) != layout.n_experts
        or len(record.arrivals) != layout.n_contact
    ):
        raise SchemaError(
            f"replication {record.replication}, epoch {record.epoch}: "
            "record dimensions differ from the first record"
        )
    row_in = [*record.obs, *map(float, record.action), *map(float, record.arrivals)]
    row_out = [*record.next_obs, *record.kpis.as_vector()]
    return row_in, row_out


def _dataset(
    trajectories: Sequence[Trajectory], layout: SurrogateLayout
) -> SurrogateDataset:
    inputs, targets, replications = [], [], []
    for trajectory in trajectories:
        for record in trajectory.records:
            row_in, row_out = record_row(record, layout)
            inputs.append(row_in)
            targets.append(row_out)
            replications.append(trajectory.replication)
    return SurrogateDataset(
        inputs=np.array(inputs, dtype=float).reshape(-1, layout.input_size),
        targets=np.array(targets, dtype=float).reshape(-1, layout.target_size),
        replications=np.array(replications, dtype=int),
        layout=layout,
    )


def build_dataset(
    trajectories: Sequence[Trajectory],
    stream: RngStream,
    holdout_fraction: float = DEFAULT_HOLDOUT_FRACTION,
) -> SurrogateSplit:
    """One row per recorded epoch, split by replication.

    Whole replications go to one side of the split; the holdout receives
    round(holdout_fraction * n) replications (at least one, never all).

    Raises:
        SchemaError: missing arrival counts, duplicate replication ids or
            inconsistent record dimensions
        InsufficientDataError: fewer than two replications
    """
    duplicates = [r for r, n in Counter(t.replication for t in trajectories).items() if n > 1]
    if duplicates:
        raise SchemaError(f"duplicate replication ids: {sorted(duplicates)}")
    if len(trajectories) < 2:
        raise InsufficientDataError(
            f"cannot split {len(trajectories)} replication(s) into train and holdout"
        )
    first = next((t.records[0] for t in trajectories if t.records), None)
    if first is None:
        raise InsufficientDataError("trajectories contain no recorded epochs")
    layout = layout_of(first)

    n = len(trajectories)
    n_holdout = min(n - 1, max(1, round(holdout_fraction * n)))
    order = stream.generator.permutation(n)
    holdout_index = set(order[:n_holdout].tolist())
    train = [t for i, t in enumerate(trajectories) if i not in holdout_index]
    holdout = [t for i, t in enumerate(trajectories) if i in holdout_index]

    split = SurrogateSplit(train=_dataset(train, layout), holdout=_dataset(holdout, layout))
    logger.info(
        "built surrogate dataset",
        extra={
            "train_replications": len(train),
            "holdout_replications": len(holdout),
            "train_rows": len(split.train),
            "holdout_rows": len(split.holdout),
        },
    )
    return split
