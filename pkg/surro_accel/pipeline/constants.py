DEFAULT_WINDOW = 10
DEFAULT_RELATIVE_BAND = 0.1
DEFAULT_BAND_FLOOR = 5.0

CURVES_DIR = "curves"
ORIGINAL_LABEL = "original"
REWARD_CHANGE_LABEL = "reward_change"
