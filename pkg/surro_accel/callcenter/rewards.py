"""Epoch and terminal rewards computed from KPIs.

The epoch reward sums a fixed penalty for every threshold a KPI exceeds:
waiting time and abandonment rate per contact group, utilization per expert
group. Penalties are non-positive, so a perfect epoch earns 0. At the horizon
each unfinished back-office task adds terminal_per_task.
"""

from collections.abc import Sequence

from surro_accel.callcenter.types import EpochKpis, Penalty, RewardSpec


def _indicator_sum(values: Sequence[float], penalties: Sequence[Sequence[Penalty]]) -> float:
    return sum(
        p.penalty
        for value, group in zip(values, penalties, strict=True)
        for p in group
        if value > p.threshold
    )


def compute_reward(kpis: EpochKpis, spec: RewardSpec) -> float:
    """Sum of penalty * I{metric > threshold} over waiting, abandonment and utilization."""
    return (
        _indicator_sum(kpis.waiting, spec.waiting)
        + _indicator_sum(kpis.abandonment, spec.abandonment)
        + _indicator_sum(kpis.utilization, spec.utilization)
    )


def terminal_reward(final_kpis: EpochKpis, spec: RewardSpec) -> float:
    """Terminal penalty on the back-office tasks left at the horizon."""
    return spec.terminal_per_task * sum(final_kpis.backoffice)
