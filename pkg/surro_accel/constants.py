THREADS_ENV_VAR = "SURRO_ACCEL_THREADS"
DEFAULT_NUM_WORKERS = 1

RESOLVED_CONFIG_FILE = "resolved_config.json"
TRAJECTORY_FILE = "trajectories.jsonl"
QNET_FILE = "qnet.json"
SURROGATE_FILE = "surrogate.json"
RMSE_FILE = "rmse.json"
REPORT_FILE = "report.json"
REPORT_MARKDOWN_FILE = "report.md"

# Stream ids: RngStream(seed, <id>) for each role in a run. Distinct roles never
# share a stream; episode streams are substreams keyed by the per-backend
# replication counter, so a run without pretraining replays direct training.
AGENT_STREAM = 0
SIMULATION_STREAM = 1
SURROGATE_STREAM = 2
COLLECTION_STREAM = 3
SPLIT_STREAM = 4
FIT_STREAM = 5
EVALUATION_STREAM = 6
BASELINE_POLICY_STREAM = 7

CURVE_FILE = "curve.csv"
