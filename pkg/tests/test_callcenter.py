import numpy as np
import pytest

from surro_accel.callcenter import (
    MODIFIED_REWARD,
    ORIGINAL_REWARD,
    CallCenterConfig,
    EpochKpis,
    SimulationEnvironment,
    compute_observation,
    compute_reward,
    init_state,
    run_replication,
    step_epoch,
    terminal_reward,
)
from surro_accel.callcenter.policies import (
    back_office_policy,
    baseline_policy,
    front_office_policy,
    random_policy,
)
from surro_accel.callcenter.types import CustomerStatus, Job
from surro_accel.callcenter.utils import read_trajectories, write_trajectories
from surro_accel.errors import ConfigError, EpisodeCompleteError, SchemaError, ShapeError
from surro_accel.stochastic.types import DeterministicSpec, ExponentialSpec, RngStream


def kpis(W, A, U, B=(0, 0, 0)) -> EpochKpis:
    return EpochKpis(W=list(W), A=list(A), U=list(U), B=list(B))


def test_initial_state_of_default_config(default_config):
    state = init_state(default_config)
    assert state.epoch_index == 0
    assert compute_observation(state).tolist() == [0, 0, 5, 10, 5, 0, 0]


def test_initial_state_without_backoffice_tasks():
    config = CallCenterConfig(backoffice_tasks_per_expert=0)
    assert compute_observation(init_state(config))[2:5].tolist() == [0, 0, 0]


def test_invalid_routing_is_a_config_error(default_config):
    broken = default_config.model_copy(
        update={"routing": [[False, False], [True, False], [True, False]]}
    )
    with pytest.raises(ConfigError, match="routing"):
        init_state(broken)


def test_config_validation_names_routing():
    with pytest.raises(ValueError, match="routing"):
        CallCenterConfig(routing=[[True, False], [True, False], [True, False]])


def test_empty_system_has_zero_kpis():
    config = CallCenterConfig(
        contact_groups=[
            group.model_copy(update={"arrival_rate_per_epoch": 0.0})
            for group in CallCenterConfig().contact_groups
        ],
        backoffice_tasks_per_expert=0,
    )
    result, state = step_epoch(init_state(config), (0, 0, 0, 0), RngStream(1))
    assert result == kpis((0, 0), (0, 0), (0, 0, 0))
    assert state.epoch_index == 1


def test_customer_without_eligible_server_abandons_after_patience(single_server):
    config = single_server(service=DeterministicSpec(value=10.0), patience=DeterministicSpec(value=0.5), tasks=5)
    result, state = step_epoch(init_state(config), (1,), RngStream(0), arrivals=[[0.0]])
    (customer,) = state.customers
    assert customer.status is CustomerStatus.ABANDONED
    assert customer.wait_ended_at - customer.arrival_time == 0.5
    assert result.waiting == [0.5]
    assert result.abandonment == [1.0]


def test_hand_traced_waiting_time(single_server):
    config = single_server(
        service=DeterministicSpec(value=10.0), patience=DeterministicSpec(value=100.0)
    )
    result, state = step_epoch(init_state(config), (0,), RngStream(0), arrivals=[[0.0, 1.0]])
    assert result.waiting == [4.5]
    assert result.abandonment == [0.0]
    assert result.utilization == [pytest.approx(20.0 / 30.0)]
    assert [c.status for c in state.customers] == [CustomerStatus.SERVED, CustomerStatus.SERVED]


def test_service_in_progress_crosses_the_boundary(single_server):
    config = single_server(
        service=DeterministicSpec(value=45.0), patience=None, horizon=2
    )
    state = init_state(config)
    first, state = step_epoch(state, (0,), RngStream(0), arrivals=[[0.0]])
    assert first.utilization == [1.0]
    assert compute_observation(state)[-2] == 1
    # a back-office action does not preempt the call in progress
    second, state = step_epoch(state, (1,), RngStream(0), arrivals=[[]])
    assert second.utilization == [pytest.approx(0.5)]
    assert state.customers[0].status is CustomerStatus.SERVED


def test_backoffice_durations_are_measured_in_epochs(single_server):
    config = single_server(tasks=3, task_duration=0.25)
    result, state = step_epoch(init_state(config), (1,), RngStream(0), arrivals=[[]])
    # three quarter-epoch tasks fill 22.5 of the 30 minutes
    assert result.utilization == [pytest.approx(0.75)]
    assert result.backoffice == [0]
    assert state.experts[0].remaining_tasks == 0


def test_default_backoffice_tasks_mostly_outlast_an_epoch(default_config):
    completed = []
    for replication in range(200):
        _, state = step_epoch(
            init_state(default_config), (1, 1, 1, 1), RngStream(8, replication)
        )
        completed.extend(
            default_config.backoffice_tasks_per_expert - e.remaining_tasks
            for e in state.experts
        )
    # lognormal mean 1.7 epochs: P(first task < 1 epoch) is about 0.33
    assert 0.25 <= np.mean(completed) <= 0.5


def test_stepping_past_the_horizon(single_server):
    state = init_state(single_server())
    _, state = step_epoch(state, (0,), RngStream(0))
    with pytest.raises(EpisodeCompleteError):
        step_epoch(state, (0,), RngStream(0))


@pytest.mark.parametrize("action", [(0, 0, 0), (0, 1, 0, 2)])
def test_malformed_action(default_config, action):
    with pytest.raises(ShapeError):
        step_epoch(init_state(default_config), action, RngStream(0))


def test_arrivals_outside_the_epoch(single_server):
    with pytest.raises(ShapeError):
        step_epoch(init_state(single_server()), (0,), RngStream(0), arrivals=[[30.0]])


def test_observation_time_feature_and_busy_count(default_config):
    state = init_state(default_config)
    state.epoch_index = default_config.horizon_epochs // 2
    for expert in state.experts:
        expert.job = Job.CALL
    obs = compute_observation(state)
    assert obs[-1] == 0.5
    assert obs[-2] == 4


def test_invariants_over_replications(default_config):
    for replication in range(100):
        stream = RngStream(2024, replication)
        policy = random_policy(default_config.n_experts, stream.substream(1))
        state = init_state(default_config)
        previous_tasks = [e.remaining_tasks for e in state.experts]
        for _ in range(default_config.horizon_epochs):
            obs = compute_observation(state)
            result, state = step_epoch(state, policy(obs), stream)
            assert all(0.0 <= u <= 1.0 for u in result.utilization)
            assert all(0.0 <= a <= 1.0 for a in result.abandonment)
            tasks = [e.remaining_tasks for e in state.experts]
            assert all(now <= before for now, before in zip(tasks, previous_tasks))
            previous_tasks = tasks

        for group, tally in enumerate(state.tally):
            in_service = sum(
                1
                for e in state.experts
                if e.job is Job.CALL and state.customers[e.customer_id].contact_group == group
            )
            waiting = len(state.queues[group])
            assert tally.arrived == tally.served + tally.abandoned + waiting + in_service

        for customer in state.customers:
            if customer.status is CustomerStatus.ABANDONED:
                assert customer.wait_ended_at - customer.arrival_time == pytest.approx(
                    customer.patience, abs=1e-9
                )
            elif customer.status in (CustomerStatus.IN_SERVICE, CustomerStatus.SERVED):
                assert customer.wait <= customer.patience + 1e-9

        for group in range(default_config.n_contact):
            started = [
                c.wait_ended_at
                for c in state.customers
                if c.contact_group == group
                and c.status in (CustomerStatus.IN_SERVICE, CustomerStatus.SERVED)
            ]
            assert started == sorted(started)


def test_mm1_mean_wait_matches_queueing_formula(single_server):
    # lambda = 0.5 / min, mu = 1 / min: Wq = rho / (mu - lambda) = 1
    config = single_server(rate=15.0, service=ExponentialSpec(rate=1.0), horizon=3334)
    state = init_state(config)
    stream = RngStream(7)
    for _ in range(config.horizon_epochs):
        _, state = step_epoch(state, (0,), stream)
    tally = state.tally[0]
    assert tally.total_wait / tally.started == pytest.approx(1.0, rel=0.1)


def test_original_reward_example():
    assert compute_reward(kpis((3, 5), (0, 0), (0.5, 0.5, 0.5)), ORIGINAL_REWARD) == -60


def test_reward_below_every_threshold():
    assert compute_reward(kpis((1, 1), (0.1, 0.1), (0.5, 0.5, 0.5)), ORIGINAL_REWARD) == 0


def test_modified_reward_example():
    assert compute_reward(kpis((1.5, 5), (0, 0), (0.95, 0, 0)), MODIFIED_REWARD) == -3400


@pytest.mark.parametrize(
    ("spec", "backlog", "expected"),
    [
        (ORIGINAL_REWARD, (0, 0, 0), 0),
        (ORIGINAL_REWARD, (1, 2, 0), -60),
        (MODIFIED_REWARD, (0, 0, 1), -50),
    ],
)
def test_terminal_reward(spec, backlog, expected):
    assert terminal_reward(kpis((0, 0), (0, 0), (0, 0, 0), backlog), spec) == expected


def test_zero_arrival_zero_task_replication():
    config = CallCenterConfig(
        contact_groups=[
            group.model_copy(update={"arrival_rate_per_epoch": 0.0})
            for group in CallCenterConfig().contact_groups
        ],
        backoffice_tasks_per_expert=0,
    )
    stream = RngStream(3)
    trajectory = run_replication(
        config, ORIGINAL_REWARD, random_policy(4, stream.substream(9)), stream
    )
    assert trajectory.total_reward == 0


def test_replication_is_deterministic(default_config):
    runs = [
        run_replication(
            default_config,
            ORIGINAL_REWARD,
            random_policy(4, RngStream(5, 7)),
            RngStream(5, 1),
        )
        for _ in range(2)
    ]
    assert runs[0].model_dump() == runs[1].model_dump()


def test_front_office_policy_keeps_every_task(default_config):
    trajectory = run_replication(
        default_config, ORIGINAL_REWARD, front_office_policy(4), RngStream(11)
    )
    last = trajectory.records[-1]
    assert len(trajectory.records) == default_config.horizon_epochs
    assert last.done
    assert last.kpis.backoffice == [5, 10, 5]
    assert last.reward - compute_reward(last.kpis, ORIGINAL_REWARD) == -400


def test_back_office_policy_clears_tasks(default_config):
    config = default_config.model_copy(
        update={"backoffice_duration": DeterministicSpec(value=1.7)}
    )
    trajectory = run_replication(
        config, ORIGINAL_REWARD, back_office_policy(4), RngStream(11)
    )
    assert trajectory.records[-1].kpis.backoffice == [0, 0, 0]


def test_unknown_baseline_policy():
    with pytest.raises(ValueError, match="unknown policy"):
        baseline_policy("weekend", 4, RngStream(0))


def test_environment_swaps_reward_without_changing_dynamics(default_config):
    env = SimulationEnvironment(default_config, ORIGINAL_REWARD)
    results = []
    for spec in (ORIGINAL_REWARD, MODIFIED_REWARD):
        env.reward_spec = spec
        env.reset(RngStream(4))
        results.append([env.step((0, 1, 0, 1)) for _ in range(env.horizon)])
    original, modified = results
    assert [r.kpis for r in original] == [r.kpis for r in modified]
    assert [r.done for r in original] == [False] * 15 + [True]
    assert np.array_equal(original[-1].observation, modified[-1].observation)


def test_trajectory_file_round_trip(tmp_path, default_config):
    trajectories = [
        run_replication(
            default_config, ORIGINAL_REWARD, front_office_policy(4), RngStream(1, r), r
        )
        for r in range(3)
    ]
    path = write_trajectories(tmp_path / "trajectories.jsonl", trajectories)
    loaded = read_trajectories(path)
    assert [t.replication for t in loaded] == [0, 1, 2]
    assert loaded[1].records == trajectories[1].records
    assert loaded[2].total_reward == pytest.approx(trajectories[2].total_reward)


def test_unreadable_trajectory_file(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text('{"replication": 0}\n')
    with pytest.raises(SchemaError, match="broken.jsonl:1"):
        read_trajectories(path)
