DEFAULT_HOLDOUT_FRACTION = 0.2
SURROGATE_FORMAT_VERSION = 1

# substreams of the fit stream
INIT_SUBSTREAM = 0
SHUFFLE_SUBSTREAM = 1
DROPOUT_SUBSTREAM = 2
