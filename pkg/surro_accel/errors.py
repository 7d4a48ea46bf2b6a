"""Exception hierarchy shared by every surro_accel sub-package.

The CLI maps ConfigError to exit status 1 and every other failure to exit
status 2 (see surro_accel.main).
"""


class SurroAccelError(Exception):
    """Base class for all errors raised by surro_accel."""


class ConfigError(SurroAccelError, ValueError):
    """A configuration document violates one or more invariants.

    Attributes:
        issues: (json_path, message) pairs, one per violated invariant
    """

    def __init__(self, issues: list[tuple[str, str]] | str):
        if isinstance(issues, str):
            issues = [("", issues)]
        self.issues = issues
        super().__init__(
            "; ".join(f"{path}: {msg}" if path else msg for path, msg in issues)
        )


class ParameterDomainError(SurroAccelError, ValueError):
    """Distribution parameters outside their domain."""


class InsufficientDataError(SurroAccelError, ValueError):
    """Not enough data to fit, split or analyse."""


class SchemaError(SurroAccelError, ValueError):
    """Recorded trajectories do not have the expected structure."""


class CausalityError(SurroAccelError, RuntimeError):
    """An event was scheduled before the current simulation clock."""


class EpisodeCompleteError(SurroAccelError, RuntimeError):
    """An environment was stepped past its horizon."""


class ShapeError(SurroAccelError, ValueError):
    """Array shapes do not match the network or the environment."""


class WeightFormatError(SurroAccelError, ValueError):
    """A weight or surrogate document is malformed or truncated."""


class DivergenceError(SurroAccelError, RuntimeError):
    """Training produced a non-finite loss.

    Attributes:
        epoch: training epoch at which the loss stopped being finite
    """

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"training diverged at epoch {epoch} (loss={loss})")


class ModelStateError(SurroAccelError, RuntimeError):
    """A model was used before it was trained."""
