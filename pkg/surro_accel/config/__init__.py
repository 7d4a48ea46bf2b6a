from surro_accel.config.types import ExperimentDocument
from surro_accel.config.utils import (
    load_config,
    validate_config,
    with_overrides,
    write_resolved_config,
)

__all__ = [
    "ExperimentDocument",
    "load_config",
    "validate_config",
    "with_overrides",
    "write_resolved_config",
]
