"""Baseline staffing policies: observation -> action vector."""

from collections.abc import Callable

import numpy as np

from surro_accel.callcenter.types import ActionVector
from surro_accel.stochastic.types import RngStream

type Policy = Callable[[np.ndarray], ActionVector]


def front_office_policy(n_experts: int) -> Policy:
    action = (0,) * n_experts
    return lambda _obs: action


def back_office_policy(n_experts: int) -> Policy:
    action = (1,) * n_experts
    return lambda _obs: action


def random_policy(n_experts: int, stream: RngStream) -> Policy:
    def policy(_obs: np.ndarray) -> ActionVector:
        return tuple(int(b) for b in stream.generator.integers(0, 2, size=n_experts))

    return policy


BASELINE_POLICIES = ("front-office", "back-office", "random")


def baseline_policy(name: str, n_experts: int, stream: RngStream) -> Policy:
    match name:
        case "front-office":
            return front_office_policy(n_experts)
        case "back-office":
            return back_office_policy(n_experts)
        case "random":
            return random_policy(n_experts, stream)
    raise ValueError(f"unknown policy {name!r}, expected one of {BASELINE_POLICIES}")
