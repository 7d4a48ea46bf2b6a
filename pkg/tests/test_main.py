import json

import pytest

from surro_accel.callcenter.utils import read_trajectories
from surro_accel.dqn import read_curve
from surro_accel.main import main


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SURRO_ACCEL_THREADS", raising=False)


def run(*args) -> int:
    return main([str(a) for a in args])


def test_simulate_writes_replication_blocks(tmp_path):
    out = tmp_path / "sim"
    assert run("simulate", "--config", "default.json", "--replications", 3, "--seed", 7, "--out", out) == 0
    trajectories = read_trajectories(out / "trajectories.jsonl")
    assert [t.replication for t in trajectories] == [0, 1, 2]
    assert all(len(t.records) == 16 for t in trajectories)
    assert json.loads((out / "resolved_config.json").read_text())["seed"] == 7


def test_simulate_is_reproducible_from_its_snapshot(tmp_path):
    assert run("simulate", "--replications", 2, "--seed", 3, "--out", tmp_path / "a") == 0
    assert run("simulate", "--replications", 2, "--seed", 3, "--out", tmp_path / "b") == 0
    first = (tmp_path / "a" / "trajectories.jsonl").read_bytes()
    assert first == (tmp_path / "b" / "trajectories.jsonl").read_bytes()
    snapshot = tmp_path / "a" / "resolved_config.json"
    assert run("simulate", "--config", snapshot, "--replications", 2, "--out", tmp_path / "c") == 0
    assert first == (tmp_path / "c" / "trajectories.jsonl").read_bytes()


def test_front_office_policy_from_the_cli(tmp_path):
    assert run("simulate", "--policy", "front-office", "--out", tmp_path) == 0
    (trajectory,) = read_trajectories(tmp_path / "trajectories.jsonl")
    assert all(r.action == [0, 0, 0, 0] for r in trajectory.records)


def test_malformed_config_exits_with_status_1(tmp_path, capsys):
    group = {"service": {"kind": "exponential", "rate": 0.25}, "patience": None}
    document = {
        "contact_groups": [
            {**group, "arrival_rate_per_epoch": -7.0},
            {**group, "arrival_rate_per_epoch": 6.0},
        ]
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(document))
    assert run("simulate", "--config", path, "--out", tmp_path / "out") == 1
    assert "contact_groups.0.arrival_rate_per_epoch" in capsys.readouterr().err


def test_missing_config_exits_with_status_1(tmp_path, capsys):
    assert run("simulate", "--config", tmp_path / "nope.json") == 1
    assert "not found" in capsys.readouterr().err


@pytest.mark.parametrize("args", [["simulate", "--bogus"], ["teleport"]])
def test_usage_errors(args):
    assert run(*args) == 2


def test_train_direct(tmp_path, tiny_config_file):
    out = tmp_path / "direct"
    assert run("train-direct", "--config", tiny_config_file, "--out", out) == 0
    assert (out / "qnet.json").is_file()
    assert len(read_curve(out / "curve.csv")) == 2
    assert run("train-direct", "--config", tiny_config_file, "--out", out, "--episodes", 1) == 0
    assert len(read_curve(out / "curve.csv")) == 1


def test_simulate_with_a_trained_network(tmp_path, tiny_config_file):
    assert run("train-direct", "--config", tiny_config_file, "--out", tmp_path) == 0
    assert run(
        "simulate", "--config", tiny_config_file, "--qnet", tmp_path / "qnet.json",
        "--replications", 2, "--out", tmp_path / "greedy",
    ) == 0
    assert len(read_trajectories(tmp_path / "greedy" / "trajectories.jsonl")) == 2


def test_collect_fit_and_pretrain_chain(tmp_path, tiny_config_file):
    assert run("collect", "--config", tiny_config_file, "--out", tmp_path / "collect") == 0
    trajectories = tmp_path / "collect" / "trajectories.jsonl"
    assert len(trajectories.read_text().splitlines()) == 3 * 2
    assert (tmp_path / "collect" / "qnet.json").is_file()

    assert run(
        "fit-surrogate", "--config", tiny_config_file, "--trajectories", trajectories,
        "--out", tmp_path / "fit",
    ) == 0
    surrogate = tmp_path / "fit" / "surrogate.json"
    assert surrogate.is_file()
    assert (tmp_path / "fit" / "rmse.json").is_file()

    assert run(
        "pretrain-finetune", "--config", tiny_config_file, "--surrogate", surrogate,
        "--out", tmp_path / "pf",
    ) == 0
    curve = read_curve(tmp_path / "pf" / "curve.csv")
    assert curve.surrogate_replications == 2
    assert curve.sim_replications == 4


def test_experiment_and_report(tmp_path, tiny_document, capsys):
    path = tmp_path / "reward_change.json"
    path.write_text(json.dumps({**tiny_document, "new_reward": "modified"}))
    out = tmp_path / "exp"
    assert run("experiment", "--config", path, "--out", out) == 0
    stdout = capsys.readouterr().out
    assert "original: median direct" in stdout
    assert "reward_change: median direct" in stdout
    report = json.loads((out / "report.json").read_text())
    assert report["reward_change"]["seeds"][0]["pretrain_finetune_curve"].startswith("curves/")

    assert run("report", "--report", out / "report.json") == 0
    assert (out / "report.md").read_text().startswith("# Experiment report")
