from surro_accel.callcenter.types import Penalty, RewardSpec


def _penalties(*pairs: tuple[float, float]) -> list[Penalty]:
    return [Penalty(threshold=t, penalty=p) for t, p in pairs]


# -10 I{W>2} -40 I{W>4} -20 I{A>0.3} -60 I{A>0.5} -4 I{U>0.9}, terminal -20 per task
ORIGINAL_REWARD = RewardSpec(
    waiting=[_penalties((2.0, -10.0), (4.0, -40.0)) for _ in range(2)],
    abandonment=[_penalties((0.3, -20.0), (0.5, -60.0)) for _ in range(2)],
    utilization=[_penalties((0.9, -4.0)) for _ in range(3)],
    terminal_per_task=-20.0,
)

# per-group thresholds tau_W = (1,2)/(2,4), tau_A = (0.2,0.3)/(0.5,0.5), tau_U = 0.9
MODIFIED_REWARD = RewardSpec(
    waiting=[
        _penalties((1.0, -100.0), (2.0, -1200.0)),
        _penalties((2.0, -100.0), (4.0, -1200.0)),
    ],
    abandonment=[
        _penalties((0.2, -40.0), (0.5, -30.0)),
        _penalties((0.3, -40.0), (0.5, -30.0)),
    ],
    utilization=[_penalties((0.9, -2000.0)) for _ in range(3)],
    terminal_per_task=-50.0,
)

REWARD_PRESETS: dict[str, RewardSpec] = {
    "original": ORIGINAL_REWARD,
    "modified": MODIFIED_REWARD,
}
