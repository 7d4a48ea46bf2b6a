import json
from pathlib import Path

import pytest

from surro_accel.callcenter import MODIFIED_REWARD, ORIGINAL_REWARD, CallCenterConfig
from surro_accel.config import load_config, validate_config, with_overrides, write_resolved_config
from surro_accel.errors import ConfigError


def default_document() -> dict:
    return json.loads(CallCenterConfig().model_dump_json())


def test_shipped_default_resolves_to_the_reference_parameters():
    doc = load_config()
    call_center = doc.call_center()
    assert call_center == CallCenterConfig()
    assert [g.arrival_rate_per_epoch for g in call_center.contact_groups] == [7.0, 6.0]
    assert [g.size for g in call_center.expert_groups] == [1, 2, 1]
    assert doc.dqn.epsilon == 0.05
    assert doc.dqn.gamma == 0.9
    assert doc.dqn.replay_capacity == 300
    assert doc.dqn.minibatch == 5
    assert doc.dqn.hidden == [32, 32]
    assert doc.surrogate.hidden == [64, 64]
    assert doc.surrogate.dropout_rate == 0.1
    assert doc.reward_spec() == ORIGINAL_REWARD
    assert doc.new_reward_spec() is None


def test_shipped_reward_change_config():
    doc = load_config(Path("reward_change.json"))
    assert doc.new_reward_spec() == MODIFIED_REWARD


def test_routing_that_leaves_a_contact_group_unserved():
    with pytest.raises(ConfigError, match="routing"):
        validate_config({"routing": [[False, False], [True, False], [True, False]]})


def test_omitted_target_sync_period_is_defaulted_and_echoed(tmp_path):
    doc = load_config()
    assert doc.dqn.target_sync_period == 100
    snapshot = json.loads(write_resolved_config(tmp_path, doc).read_text())
    assert snapshot["dqn"]["target_sync_period"] == 100
    assert snapshot["reward"]["terminal_per_task"] == -20.0


def test_negative_rate_names_the_field():
    document = default_document()
    document["contact_groups"][0]["arrival_rate_per_epoch"] = -1.0
    with pytest.raises(ConfigError) as raised:
        validate_config(document)
    assert [path for path, _ in raised.value.issues] == ["contact_groups.0.arrival_rate_per_epoch"]


def test_unknown_reward_preset():
    with pytest.raises(ConfigError, match="unknown reward preset"):
        validate_config({"reward": "friendly"})


def test_reward_must_match_the_group_counts():
    document = {
        "contact_groups": default_document()["contact_groups"][:1],
        "expert_groups": [{"size": 1}],
        "routing": [[True]],
    }
    with pytest.raises(ConfigError, match="reward.waiting: expected 1 penalty lists"):
        validate_config(document)


def test_budget_must_cover_the_stabilization_window():
    with pytest.raises(ConfigError, match="experiment.max_episodes"):
        validate_config({"experiment": {"max_episodes": 5}})


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError) as raised:
        validate_config({"dqn": {"learning_rat": 0.1}})
    assert raised.value.issues[0][0] == "dqn.learning_rat"


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.json")


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"seed\": ")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(path)


def test_overrides_merge_into_nested_sections():
    doc = load_config(seed=9, experiment={"max_episodes": 30}, dqn=None)
    assert doc.seed == 9
    assert doc.experiment.max_episodes == 30
    assert doc.experiment.n_seeds == 5
    assert doc.seeds() == [9, 10, 11, 12, 13]
    changed = with_overrides(doc, surrogate={"epochs": 3})
    assert changed.surrogate.epochs == 3
    assert changed.experiment.max_episodes == 30


def test_resolved_snapshot_reloads_to_the_same_document(tmp_path):
    doc = load_config(Path("reward_change.json"), seed=4)
    path = write_resolved_config(tmp_path, doc)
    assert load_config(path) == doc.resolved()
