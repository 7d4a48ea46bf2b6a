from surro_accel.dqn.agent import (
    DqnAgent,
    decode_action,
    encode_action,
    evaluate_policy,
    greedy_policy,
    select_action,
    td_targets,
    train,
    train_step,
)
from surro_accel.dqn.replay import ReplayBuffer
from surro_accel.dqn.types import CurveEntry, DqnConfig, LearningCurve, Phase, Transition
from surro_accel.dqn.utils import read_curve, write_curve

__all__ = [
    "CurveEntry",
    "DqnAgent",
    "DqnConfig",
    "LearningCurve",
    "Phase",
    "ReplayBuffer",
    "Transition",
    "decode_action",
    "encode_action",
    "evaluate_policy",
    "greedy_policy",
    "read_curve",
    "select_action",
    "td_targets",
    "train",
    "train_step",
    "write_curve",
]
