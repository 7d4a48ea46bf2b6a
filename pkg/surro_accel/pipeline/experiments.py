"""Direct training against surrogate pretraining plus simulation fine-tuning.

Every function here is deterministic given its seed. Per-seed work is packed
into module-level functions so the harness can ship it to worker processes.
"""

import logging
from functools import partial
from pathlib import Path
from typing import TYPE_CHECKING

import logfire
import numpy as np

from surro_accel.callcenter.environment import SimulationEnvironment
from surro_accel.callcenter.policies import Policy
from surro_accel.callcenter.replication import run_replication
from surro_accel.callcenter.types import CallCenterConfig, RewardSpec, Trajectory
from surro_accel.callcenter.utils import write_trajectories
from surro_accel.constants import (
    COLLECTION_STREAM,
    REPORT_FILE,
    SPLIT_STREAM,
    SURROGATE_FILE,
    TRAJECTORY_FILE,
)
from surro_accel.dqn.agent import DqnAgent, evaluate_policy, train
from surro_accel.dqn.types import DqnConfig, LearningCurve, Phase
from surro_accel.errors import InsufficientDataError
from surro_accel.neural.mlp import Mlp
from surro_accel.pipeline.constants import ORIGINAL_LABEL, REWARD_CHANGE_LABEL
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
    SeedRun,
    StabilizationCriterion,
)
from surro_accel.pipeline.utils import curve_path, write_seed_curves
from surro_accel.stochastic.types import RngStream
from surro_accel.surrogate.dataset import build_dataset
from surro_accel.surrogate.environment import surrogate_environment
from surro_accel.surrogate.model import train_surrogate
from surro_accel.surrogate.types import RmseReport, SurrogateConfig, SurrogateModel
from surro_accel.surrogate.utils import save_surrogate
from surro_accel.utils import write_json

if TYPE_CHECKING:
    from surro_accel.config.types import ExperimentDocument

logger = logging.getLogger(__name__)


def direct_agent(
    config: CallCenterConfig,
    reward: RewardSpec,
    dqn_cfg: DqnConfig,
    seed: int,
    episodes: int | None = None,
) -> tuple[DqnAgent, LearningCurve]:
    """Train a fresh agent on the simulation only; returns the agent and its curve."""
    if episodes is not None:
        dqn_cfg = dqn_cfg.model_copy(update={"episodes": episodes})
    env = SimulationEnvironment(config, reward)
    agent = DqnAgent.for_environment(env, dqn_cfg, seed)
    _, curve = train(env, dqn_cfg, reward, seed, agent=agent, phase=Phase.DIRECT)
    return agent, curve


def run_direct(
    config: CallCenterConfig,
    reward: RewardSpec,
    dqn_cfg: DqnConfig,
    seed: int,
    episodes: int | None = None,
) -> LearningCurve:
    """Learning curve of direct simulation-based training.

    Every episode counts one simulation replication.
    """
    _, curve = direct_agent(config, reward, dqn_cfg, seed, episodes)
    return curve


def pretrain_finetune_agent(
    config: CallCenterConfig,
    reward: RewardSpec,
    surrogate: SurrogateModel,
    dqn_cfg: DqnConfig,
    seed: int,
    pretrain_episodes: int,
    finetune_episodes: int | None = None,
    reset_replay: bool = True,
    reset_optimizer: bool = False,
) -> tuple[DqnAgent, LearningCurve]:
    """Pretrain on the surrogate, then continue the same agent on the simulation.

    Args:
        config: call center used for fine-tuning
        reward: reward applied in both phases
        surrogate: trained surrogate used for pretraining
        dqn_cfg: hyperparameters; dqn_cfg.episodes is the default fine-tuning length
        seed: master seed
        pretrain_episodes: surrogate episodes
        finetune_episodes: simulation episodes, dqn_cfg.episodes when omitted
        reset_replay: empty the replay memory between phases
        reset_optimizer: restart the optimizer moments between phases
    """
    finetune_episodes = dqn_cfg.episodes if finetune_episodes is None else finetune_episodes
    sim_env = SimulationEnvironment(config, reward)
    surrogate_env = surrogate_environment(surrogate, reward, config.horizon_epochs)
    agent = DqnAgent.for_environment(sim_env, dqn_cfg, seed)

    _, curve = train(
        surrogate_env,
        dqn_cfg.model_copy(update={"episodes": pretrain_episodes}),
        reward,
        seed,
        agent=agent,
        phase=Phase.PRETRAIN,
    )
    if reset_replay:
        agent.reset_replay()
    if reset_optimizer:
        agent.reset_optimizer()
    _, curve = train(
        sim_env,
        dqn_cfg.model_copy(update={"episodes": finetune_episodes}),
        reward,
        seed,
        agent=agent,
        phase=Phase.FINETUNE,
        curve=curve,
    )
    return agent, curve


def run_pretrain_finetune(
    config: CallCenterConfig,
    reward: RewardSpec,
    surrogate: SurrogateModel,
    dqn_cfg: DqnConfig,
    seed: int,
    pretrain_episodes: int,
    finetune_episodes: int | None = None,
    reset_replay: bool = True,
    reset_optimizer: bool = False,
) -> LearningCurve:
    """Single curve over both phases; see pretrain_finetune_agent."""
    _, curve = pretrain_finetune_agent(
        config,
        reward,
        surrogate,
        dqn_cfg,
        seed,
        pretrain_episodes,
        finetune_episodes,
        reset_replay,
        reset_optimizer,
    )
    return curve


@logfire.instrument("collect", extract_args=["n"])
def collect(
    config: CallCenterConfig,
    reward: RewardSpec,
    policy: Policy,
    n: int,
    seed: int,
) -> list[Trajectory]:
    """Record n simulation replications under policy."""
    streams = RngStream(seed, COLLECTION_STREAM)
    return [
        run_replication(config, reward, policy, streams.substream(r), r) for r in range(n)
    ]


def fit_surrogate(
    trajectories: list[Trajectory],
    config: CallCenterConfig,
    surrogate_cfg: SurrogateConfig,
    seed: int,
) -> tuple[SurrogateModel, RmseReport]:
    split = build_dataset(
        trajectories, RngStream(seed, SPLIT_STREAM), surrogate_cfg.holdout_fraction
    )
    return train_surrogate(split, config, surrogate_cfg, seed)


def collect_and_fit(
    config: CallCenterConfig,
    reward: RewardSpec,
    policy: Policy,
    n: int,
    seed: int,
    surrogate_cfg: SurrogateConfig | None = None,
    out_dir: Path | None = None,
) -> tuple[SurrogateModel, RmseReport]:
    """Record n replications with policy and fit a surrogate on them.

    With out_dir, the trajectory file, the surrogate and its rmse.json are
    written there.

    Raises:
        InsufficientDataError: n < 2, the data cannot be split
    """
    if n < 2:
        raise InsufficientDataError(f"{n} replication(s) cannot train and validate a surrogate")
    surrogate_cfg = surrogate_cfg or SurrogateConfig()
    trajectories = collect(config, reward, policy, n, seed)
    if out_dir is not None:
        write_trajectories(out_dir / TRAJECTORY_FILE, trajectories)
    model, rmse = fit_surrogate(trajectories, config, surrogate_cfg, seed)
    if out_dir is not None:
        save_surrogate(out_dir / SURROGATE_FILE, model, rmse)
    return model, rmse


def run_seed(
    config: CallCenterConfig,
    reward: RewardSpec,
    surrogate: SurrogateModel | None,
    dqn_cfg: DqnConfig,
    spec: ExperimentSpec,
    seed: int,
    direct_run: tuple[Mlp, LearningCurve] | None = None,
) -> SeedRun:
    """Both strategies for one seed; only the direct one when surrogate is None.

    direct_run is an already trained direct network and its curve for this
    seed; when given, direct training is not repeated.
    """
    if direct_run is None:
        direct, direct_curve = direct_agent(config, reward, dqn_cfg, seed, spec.max_episodes)
        direct_run = (direct.qnet, direct_curve)
    direct_qnet, direct_curve = direct_run
    pf_curve = None
    pf_evaluation: list[float] = []
    env = SimulationEnvironment(config, reward)
    if surrogate is not None:
        pf, pf_curve = pretrain_finetune_agent(
            config,
            reward,
            surrogate,
            dqn_cfg,
            seed,
            spec.pretrain_surrogate_episodes,
            spec.max_episodes,
            spec.finetune_reset_replay,
            spec.finetune_reset_optimizer,
        )
        pf_evaluation = evaluate_policy(env, pf.qnet, spec.evaluation_episodes, seed)
    return SeedRun(
        seed=seed,
        direct=direct_curve,
        pretrain_finetune=pf_curve,
        direct_evaluation=evaluate_policy(env, direct_qnet, spec.evaluation_episodes, seed),
        pretrain_finetune_evaluation=pf_evaluation,
    )


def _mean(values: list[float]) -> float | None:
    return float(np.mean(values)) if values else None


def _outcome(
    run: SeedRun, crit: StabilizationCriterion, label: str, out_dir: Path | None
) -> SeedOutcome:
    direct_phase = frozenset({Phase.DIRECT})
    finetune_phase = frozenset({Phase.FINETUNE})
    pf = run.pretrain_finetune
    if out_dir is not None:
        write_seed_curves(out_dir, label, run)
    return SeedOutcome(
        seed=run.seed,
        direct_stabilized_at=detect_stabilization(run.direct, crit, direct_phase),
        pretrain_finetune_stabilized_at=(
            None if pf is None else detect_stabilization(pf, crit, finetune_phase)
        ),
        direct_replications=replications_to_stabilize(run.direct, crit, direct_phase),
        pretrain_finetune_replications=(
            None if pf is None else replications_to_stabilize(pf, crit, finetune_phase)
        ),
        direct_curve=None if out_dir is None else curve_path(label, run.seed, "direct"),
        pretrain_finetune_curve=(
            None
            if out_dir is None or pf is None
            else curve_path(label, run.seed, "pretrain_finetune")
        ),
        direct_mean_reward=_mean(run.direct_evaluation),
        pretrain_finetune_mean_reward=_mean(run.pretrain_finetune_evaluation),
    )


def compare_strategies(
    config: CallCenterConfig,
    reward: RewardSpec,
    surrogate: SurrogateModel | None,
    dqn_cfg: DqnConfig,
    spec: ExperimentSpec,
    crit: StabilizationCriterion,
    seeds: list[int],
    label: str = ORIGINAL_LABEL,
    harness: ExperimentHarness | None = None,
    out_dir: Path | None = None,
    baseline_reward: RewardSpec | None = None,
    rmse: RmseReport | None = None,
    direct_runs: dict[int, tuple[Mlp, LearningCurve]] | None = None,
) -> ComparisonReport:
    """Train both strategies for every seed and compare replications to stabilize.

    A curve that never stabilizes counts its full simulation budget. Seeds in
    direct_runs reuse that trained direct network and curve.
    """
    harness = harness or ExperimentHarness()
    direct_runs = direct_runs or {}
    with logfire.span("compare strategies", label=label, seeds=len(seeds)):
        runs = harness.map(
            [
                partial(
                    run_seed,
                    config,
                    reward,
                    surrogate,
                    dqn_cfg,
                    spec,
                    seed,
                    direct_run=direct_runs.get(seed),
                )
                for seed in seeds
            ]
        )
    outcomes = [_outcome(run, crit, label, out_dir) for run in runs]

    direct = [o.direct_replications for o in outcomes]
    median_direct = float(np.median(direct))
    median_pf = ratio = None
    if surrogate is not None:
        pf = [o.pretrain_finetune_replications for o in outcomes]
        median_pf = float(np.median(pf))
        ratio = speedup_ratio(direct, pf)
    logfire.info(
        "comparison finished",
        label=label,
        median_direct=median_direct,
        median_pretrain_finetune=median_pf,
        ratio=ratio,
    )
    return ComparisonReport(
        label=label,
        reward=reward,
        baseline_reward=baseline_reward,
        seeds=outcomes,
        median_direct=median_direct,
        median_pretrain_finetune=median_pf,
        ratio=ratio,
        surrogate_replications_per_seed=(
            spec.pretrain_surrogate_episodes if surrogate is not None else 0
        ),
        rmse=rmse,
    )


def reward_change_experiment(
    config: CallCenterConfig,
    old_reward: RewardSpec,
    new_reward: RewardSpec,
    surrogate: SurrogateModel,
    dqn_cfg: DqnConfig,
    spec: ExperimentSpec,
    crit: StabilizationCriterion,
    seeds: list[int],
    harness: ExperimentHarness | None = None,
    out_dir: Path | None = None,
    rmse: RmseReport | None = None,
) -> ComparisonReport:
    """Retrain from scratch under new_reward, reusing the surrogate fitted under old_reward.

    The surrogate predicts KPIs only, so the new reward is applied to its
    predictions without any re-fit.
    """
    return compare_strategies(
        config,
        new_reward,
        surrogate,
        dqn_cfg,
        spec,
        crit,
        seeds,
        label=REWARD_CHANGE_LABEL,
        harness=harness,
        out_dir=out_dir,
        baseline_reward=old_reward,
        rmse=rmse,
    )


def run_experiment(
    doc: "ExperimentDocument",
    out_dir: Path | None = None,
    harness: ExperimentHarness | None = None,
) -> ExperimentReport:
    """The full chain of a configuration document.

    In pretrain_finetune mode: direct training under the original reward, then
    collection with the final epsilon-greedy policy, surrogate fit, comparison
    under the original reward and, when new_reward is set, comparison after
    the reward change. In direct mode only direct runs are compared.
    """
    config = doc.call_center()
    spec = doc.experiment
    reward = doc.reward_spec()
    new_reward = doc.new_reward_spec()
    seeds = doc.seeds()
    harness = harness or ExperimentHarness()
    common = dict(
        config=config,
        dqn_cfg=doc.dqn,
        spec=spec,
        crit=doc.stabilization,
        seeds=seeds,
        harness=harness,
        out_dir=out_dir,
    )

    with logfire.span("experiment", mode=spec.mode.value, seed=doc.seed):
        if spec.mode is Mode.DIRECT:
            report = ExperimentReport(
                seed=doc.seed,
                mode=spec.mode,
                original=compare_strategies(reward=reward, surrogate=None, **common),
                reward_change=(
                    None
                    if new_reward is None
                    else compare_strategies(
                        reward=new_reward,
                        surrogate=None,
                        label=REWARD_CHANGE_LABEL,
                        baseline_reward=reward,
                        **common,
                    )
                ),
            )
        else:
            agent, collection_curve = direct_agent(
                config, reward, doc.dqn, doc.seed, spec.max_episodes
            )
            collection_curve_file = None
            if out_dir is not None:
                collection_curve_file = write_seed_curves(
                    out_dir, "collection", SeedRun(doc.seed, collection_curve, None, [], [])
                )[0]
            surrogate, rmse = collect_and_fit(
                config,
                reward,
                agent.policy(),
                spec.collect_replications,
                doc.seed,
                doc.surrogate,
                out_dir,
            )
            report = ExperimentReport(
                seed=doc.seed,
                mode=spec.mode,
                trajectories=None if out_dir is None else TRAJECTORY_FILE,
                surrogate=None if out_dir is None else SURROGATE_FILE,
                rmse=rmse,
                collection_curve=collection_curve_file,
                original=compare_strategies(
                    reward=reward,
                    surrogate=surrogate,
                    rmse=rmse,
                    direct_runs={doc.seed: (agent.qnet, collection_curve)},
                    **common,
                ),
                reward_change=(
                    None
                    if new_reward is None
                    else reward_change_experiment(
                        old_reward=reward,
                        new_reward=new_reward,
                        surrogate=surrogate,
                        rmse=rmse,
                        **common,
                    )
                ),
            )

    if out_dir is not None:
        write_json(out_dir / REPORT_FILE, report)
    logger.info(
        "experiment finished",
        extra={"seed": doc.seed, "mode": spec.mode.value, "out_dir": str(out_dir)},
    )
    return report
