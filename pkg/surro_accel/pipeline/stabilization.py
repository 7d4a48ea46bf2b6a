"""When does a reward trajectory settle?

A curve of n episodes is stable from episode e when every moving average over
w consecutive episodes starting at e or later stays within the band around the
mean of the final w episodes. Candidates stop at n - 2w so that the stable
stretch and the final window do not coincide.
"""

from collections.abc import Sequence

import numpy as np

from surro_accel.dqn.types import LearningCurve, Phase
from surro_accel.errors import InsufficientDataError
from surro_accel.pipeline.types import StabilizationCriterion

SIMULATION_PHASES = frozenset({Phase.DIRECT, Phase.FINETUNE})


def stabilization_index(rewards: Sequence[float], crit: StabilizationCriterion) -> int | None:
    w = crit.window
    n = len(rewards)
    if n < 2 * w:
        raise InsufficientDataError(f"{n} episodes cannot be judged with a window of {w}")
    moving = np.convolve(np.asarray(rewards, dtype=float), np.ones(w) / w, mode="valid")
    final = moving[-1]
    outside = np.abs(moving - final) > crit.band_for(final)
    # last moving average outside the band; stability starts right after it
    violations = np.flatnonzero(outside)
    start = int(violations[-1]) + 1 if violations.size else 0
    return start if start <= n - 2 * w else None


def detect_stabilization(
    curve: LearningCurve,
    crit: StabilizationCriterion,
    phases: frozenset[Phase] = SIMULATION_PHASES,
) -> int | None:
    """Episode index, counted within the selected phases, where the curve stabilizes.

    Raises:
        InsufficientDataError: fewer than 2 * window episodes in the selected phases
    """
    return stabilization_index(curve.rewards(set(phases)), crit)


def replications_to_stabilize(
    curve: LearningCurve, crit: StabilizationCriterion, phases: frozenset[Phase]
) -> int:
    """Stabilization index, or the phase length when the curve never settles."""
    index = detect_stabilization(curve, crit, phases)
    return len(curve.rewards(set(phases))) if index is None else index


def speedup_ratio(direct: Sequence[int], pretrain_finetune: Sequence[int]) -> float:
    """median(direct) / max(median(pretrain_finetune), 1)."""
    return float(np.median(direct)) / max(float(np.median(pretrain_finetune)), 1.0)
