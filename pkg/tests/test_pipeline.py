import json
from functools import partial

import pytest

from surro_accel.callcenter import MODIFIED_REWARD, ORIGINAL_REWARD
from surro_accel.callcenter.policies import front_office_policy
from surro_accel.config import validate_config
from surro_accel.dqn import CurveEntry, DqnConfig, LearningCurve, Phase, read_curve
from surro_accel.errors import InsufficientDataError
from surro_accel.pipeline import (
    ExperimentHarness,
    ExperimentReport,
    ExperimentSpec,
    Mode,
    StabilizationCriterion,
    collect,
    collect_and_fit,
    compare_strategies,
    detect_stabilization,
    direct_agent,
    experiments,
    replications_to_stabilize,
    reward_change_experiment,
    run_direct,
    run_experiment,
    run_pretrain_finetune,
    speedup_ratio,
)
from surro_accel.pipeline.stabilization import stabilization_index
from surro_accel.pipeline.utils import render_report
from surro_accel.surrogate import SurrogateConfig

SMALL = DqnConfig(hidden=[8], episodes=3, minibatch=2)
TINY_SPEC = ExperimentSpec(
    collect_replications=3,
    pretrain_surrogate_episodes=2,
    max_episodes=4,
    n_seeds=2,
    evaluation_episodes=1,
)
WINDOW_2 = StabilizationCriterion(window=2)


def curve_of(
    rewards: list[float], phase: Phase = Phase.DIRECT, start: int = 0, surrogate: int = 0
) -> list[CurveEntry]:
    sim = phase is not Phase.PRETRAIN
    return [
        CurveEntry(
            episode=start + i,
            total_reward=r,
            cumulative_sim_replications=i + 1 if sim else 0,
            cumulative_surrogate_replications=surrogate if sim else i + 1,
            phase=phase,
        )
        for i, r in enumerate(rewards)
    ]


@pytest.fixture
def quick_surrogate(short_config):
    model, _ = collect_and_fit(
        short_config,
        ORIGINAL_REWARD,
        front_office_policy(4),
        n=4,
        seed=0,
        surrogate_cfg=SurrogateConfig(hidden=[8], epochs=2),
    )
    return model


def test_constant_curve_is_stable_from_the_start():
    assert stabilization_index([-50.0] * 40, StabilizationCriterion(window=5)) == 0


def test_ramp_then_flat_curve_stabilizes_near_the_change_point():
    rewards = [-200.0 + 9.0 * k for k in range(20)] + [-20.0] * 40
    index = stabilization_index(rewards, StabilizationCriterion(window=5))
    assert 15 <= index <= 25


def test_wide_oscillation_never_stabilizes():
    rewards = [100.0 if k % 2 else -100.0 for k in range(60)]
    assert stabilization_index(rewards, StabilizationCriterion(window=5)) is None


def test_short_curve_cannot_be_judged():
    with pytest.raises(InsufficientDataError):
        stabilization_index([0.0] * 7, StabilizationCriterion(window=4))


def test_explicit_band_overrides_the_relative_band():
    rewards = [-100.0] * 10 + [-80.0] * 30
    assert stabilization_index(rewards, StabilizationCriterion(window=5, band=30.0)) == 0
    assert stabilization_index(rewards, StabilizationCriterion(window=5)) == 8


def test_stabilization_counts_only_the_selected_phases():
    entries = curve_of([-500.0] * 10, Phase.PRETRAIN) + curve_of(
        [-300.0] * 6 + [-50.0] * 20, Phase.FINETUNE, start=10, surrogate=10
    )
    curve = LearningCurve(entries=entries)
    crit = StabilizationCriterion(window=4)
    assert detect_stabilization(curve, crit, frozenset({Phase.FINETUNE})) == 6
    assert replications_to_stabilize(curve, crit, frozenset({Phase.FINETUNE})) == 6


def test_unstable_curve_counts_its_whole_budget():
    curve = LearningCurve(entries=curve_of([100.0 if k % 2 else -100.0 for k in range(30)]))
    crit = StabilizationCriterion(window=5)
    assert replications_to_stabilize(curve, crit, frozenset({Phase.DIRECT})) == 30


def test_speedup_ratio():
    assert speedup_ratio([130] * 5, [55] * 5) == pytest.approx(130 / 55)
    assert speedup_ratio([10, 20, 30], [0, 0, 0]) == 20.0


def test_direct_run_without_episodes(short_config):
    assert len(run_direct(short_config, ORIGINAL_REWARD, SMALL, seed=0, episodes=0)) == 0


def test_direct_run_is_reproducible(short_config):
    first = run_direct(short_config, ORIGINAL_REWARD, SMALL, seed=1)
    assert first == run_direct(short_config, ORIGINAL_REWARD, SMALL, seed=1)
    assert first.sim_replications == 3


def test_collection_records_every_epoch(short_config):
    trajectories = collect(short_config, ORIGINAL_REWARD, front_office_policy(4), 5, seed=2)
    assert sum(len(t.records) for t in trajectories) == 5 * 4
    assert [t.replication for t in trajectories] == list(range(5))


@pytest.mark.parametrize("n", [0, 1])
def test_collect_and_fit_needs_two_replications(short_config, n):
    with pytest.raises(InsufficientDataError):
        collect_and_fit(short_config, ORIGINAL_REWARD, front_office_policy(4), n=n, seed=0)


def test_collect_and_fit_writes_its_artifacts(tmp_path, short_config):
    collect_and_fit(
        short_config,
        ORIGINAL_REWARD,
        front_office_policy(4),
        n=3,
        seed=0,
        surrogate_cfg=SurrogateConfig(hidden=[8], epochs=1),
        out_dir=tmp_path,
    )
    assert len((tmp_path / "trajectories.jsonl").read_text().splitlines()) == 12
    assert (tmp_path / "surrogate.json").is_file()
    assert (tmp_path / "rmse.json").is_file()


def test_zero_pretraining_replays_direct_training(short_config, quick_surrogate):
    direct = run_direct(short_config, ORIGINAL_REWARD, SMALL, seed=4)
    pf = run_pretrain_finetune(
        short_config, ORIGINAL_REWARD, quick_surrogate, SMALL, seed=4, pretrain_episodes=0
    )
    assert pf.rewards() == direct.rewards()
    assert {e.phase for e in pf.entries} == {Phase.FINETUNE}


def test_pretrain_finetune_counters(short_config, quick_surrogate):
    curve = run_pretrain_finetune(
        short_config, ORIGINAL_REWARD, quick_surrogate, SMALL, seed=5, pretrain_episodes=2
    )
    assert [e.phase for e in curve.entries] == [Phase.PRETRAIN] * 2 + [Phase.FINETUNE] * 3
    assert curve.surrogate_replications == 2
    assert curve.sim_replications == 3
    assert [e.cumulative_sim_replications for e in curve.entries] == [0, 0, 1, 2, 3]


def test_harness_keeps_job_order():
    jobs = [partial(pow, 2, i) for i in range(6)]
    assert ExperimentHarness(num_workers=2).map(jobs) == [1, 2, 4, 8, 16, 32]
    assert ExperimentHarness(num_workers=1).map(jobs) == [1, 2, 4, 8, 16, 32]


def test_harness_propagates_job_failures():
    with pytest.raises(ValueError):
        ExperimentHarness(num_workers=1).map([partial(int, "7"), partial(int, "x")])


def test_comparison_report(tmp_path, short_config, quick_surrogate):
    report = compare_strategies(
        short_config,
        ORIGINAL_REWARD,
        quick_surrogate,
        SMALL,
        TINY_SPEC,
        WINDOW_2,
        seeds=[0, 1],
        harness=ExperimentHarness(1),
        out_dir=tmp_path,
    )
    assert [o.seed for o in report.seeds] == [0, 1]
    assert report.surrogate_replications_per_seed == 2
    assert report.ratio is not None
    for outcome in report.seeds:
        assert 0 <= outcome.direct_replications <= 4
        assert 0 <= outcome.pretrain_finetune_replications <= 4
        assert len(read_curve(tmp_path / outcome.direct_curve)) == 4
        assert len(read_curve(tmp_path / outcome.pretrain_finetune_curve)) == 6


def test_reward_change_keeps_the_old_reward_as_baseline(short_config, quick_surrogate):
    report = reward_change_experiment(
        short_config,
        ORIGINAL_REWARD,
        MODIFIED_REWARD,
        quick_surrogate,
        SMALL,
        TINY_SPEC,
        WINDOW_2,
        seeds=[0],
        harness=ExperimentHarness(1),
    )
    assert report.label == "reward_change"
    assert report.reward == MODIFIED_REWARD
    assert report.baseline_reward == ORIGINAL_REWARD
    assert report.seeds[0].direct_curve is None


def test_unchanged_reward_reproduces_the_original_comparison(short_config, quick_surrogate):
    args = (short_config, ORIGINAL_REWARD, quick_surrogate, SMALL, TINY_SPEC, WINDOW_2)
    original = compare_strategies(*args, seeds=[0, 1], harness=ExperimentHarness(1))
    changed = reward_change_experiment(
        short_config,
        ORIGINAL_REWARD,
        ORIGINAL_REWARD,
        quick_surrogate,
        SMALL,
        TINY_SPEC,
        WINDOW_2,
        seeds=[0, 1],
        harness=ExperimentHarness(1),
    )
    assert changed.seeds == original.seeds
    assert changed.ratio == original.ratio


def test_comparison_reuses_a_trained_direct_run(monkeypatch, short_config):
    args = (short_config, ORIGINAL_REWARD, None, SMALL, TINY_SPEC, WINDOW_2)
    reference = compare_strategies(*args, seeds=[0, 1], harness=ExperimentHarness(1))
    agent, curve = direct_agent(short_config, ORIGINAL_REWARD, SMALL, 0, TINY_SPEC.max_episodes)

    trained_seeds = []
    train_direct = experiments.direct_agent

    def counting_direct_agent(*args, **kwargs):
        trained_seeds.append(args[3])
        return train_direct(*args, **kwargs)

    monkeypatch.setattr(experiments, "direct_agent", counting_direct_agent)
    report = compare_strategies(
        *args,
        seeds=[0, 1],
        harness=ExperimentHarness(1),
        direct_runs={0: (agent.qnet, curve)},
    )
    assert trained_seeds == [1]
    assert report.seeds == reference.seeds


def test_full_experiment_writes_every_artifact(tmp_path, tiny_document):
    doc = validate_config({**tiny_document, "new_reward": "modified"})
    report = run_experiment(doc, tmp_path, ExperimentHarness(1))

    saved = ExperimentReport.model_validate_json((tmp_path / "report.json").read_bytes())
    assert saved == report
    assert report.mode is Mode.PRETRAIN_FINETUNE
    assert report.reward_change is not None
    assert report.reward_change.baseline_reward == ORIGINAL_REWARD
    for name in ("trajectories.jsonl", "surrogate.json", "rmse.json"):
        assert (tmp_path / name).is_file()
    assert report.collection_curve == "curves/collection_seed3_direct.csv"
    assert len(list((tmp_path / "curves").glob("*.csv"))) == 9

    markdown = render_report(report, tmp_path, window=2)
    assert markdown.startswith("# Experiment report")
    assert "## Original" in markdown
    assert "## Reward change" in markdown


def test_direct_mode_skips_the_surrogate(tmp_path, tiny_document):
    tiny_document["experiment"]["mode"] = "direct"
    report = run_experiment(validate_config(tiny_document), tmp_path, ExperimentHarness(1))
    assert report.original.ratio is None
    assert report.original.median_pretrain_finetune is None
    assert report.rmse is None
    assert not (tmp_path / "surrogate.json").exists()
    assert json.loads((tmp_path / "report.json").read_text())["mode"] == "direct"


@pytest.mark.slow
def test_surrogate_pretraining_halves_simulation_replications():
    doc = validate_config({"new_reward": "modified"})
    report = run_experiment(doc, None, ExperimentHarness())
    assert report.original.ratio >= 2.0
    assert report.reward_change.ratio >= 2.0
