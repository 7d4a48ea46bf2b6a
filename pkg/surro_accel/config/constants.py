CONFIG_PACKAGE = "surro_accel"
CONFIG_DIR = "configs"
DEFAULT_CONFIG = "default.json"
