from surro_accel.pipeline.experiments import (
    collect,
    collect_and_fit,
    compare_strategies,
    direct_agent,
    fit_surrogate,
    pretrain_finetune_agent,
    reward_change_experiment,
    run_direct,
    run_experiment,
    run_pretrain_finetune,
)
from surro_accel.pipeline.harness import ExperimentHarness
from surro_accel.pipeline.stabilization import (
    detect_stabilization,
    replications_to_stabilize,
    speedup_ratio,
)
from surro_accel.pipeline.types import (
    ComparisonReport,
    ExperimentReport,
    ExperimentSpec,
    Mode,
    SeedOutcome,
    StabilizationCriterion,
)

__all__ = [
    "ComparisonReport",
    "ExperimentHarness",
    "ExperimentReport",
    "ExperimentSpec",
    "Mode",
    "SeedOutcome",
    "StabilizationCriterion",
    "collect",
    "collect_and_fit",
    "compare_strategies",
    "detect_stabilization",
    "direct_agent",
    "fit_surrogate",
    "pretrain_finetune_agent",
    "replications_to_stabilize",
    "reward_change_experiment",
    "run_direct",
    "run_experiment",
    "run_pretrain_finetune",
    "speedup_ratio",
]
