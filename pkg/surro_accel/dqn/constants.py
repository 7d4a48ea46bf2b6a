DEFAULT_TARGET_SYNC_PERIOD = 100
DEFAULT_LOG_EVERY = 10

# substreams of the agent stream
INIT_SUBSTREAM = 0
POLICY_SUBSTREAM = 1
REPLAY_SUBSTREAM = 2

CURVE_COLUMNS = [
    "episode",
    "total_reward",
    "cumulative_sim_replications",
    "cumulative_surrogate_replications",
    "phase",
]
