"""Random streams and input-model types.

DistributionSpec is serialized in config files as a tagged object, e.g.
``{"kind": "gamma", "shape": 5.0, "scale": 0.9}``. Gamma uses the shape-scale
convention (mean = shape * scale); switching to shape-rate only means reading
``scale`` as ``1 / rate`` in GammaSpec.
"""

import math
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from surro_accel.errors import ParameterDomainError
from surro_accel.stochastic.utils import lognormal_params_from_moments

U64_MAX = 2**64 - 1


class RngStream:
    """A reproducible random stream keyed by (seed, stream_id).

    Streams are independent sub-streams of one PCG64 family: the key becomes
    the spawn key of a numpy SeedSequence, so distinct stream ids (or
    substream paths) never share state and the same key replays the same
    sequence on every platform.

    Attributes:
        seed: 64-bit master seed
        stream_id: 64-bit stream index (replication, role, ...)
        path: further spawn-key components added by substream()
        generator: the numpy Generator this stream draws from
    """

    __slots__ = ("seed", "stream_id", "path", "generator")

    def __init__(self, seed: int, stream_id: int = 0, path: tuple[int, ...] = ()):
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if not 0 <= value <= U64_MAX:
                raise ParameterDomainError(f"{name} must be a 64-bit unsigned int")
        self.seed = seed
        self.stream_id = stream_id
        self.path = path
        sequence = np.random.SeedSequence(seed, spawn_key=(stream_id, *path))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def substream(self, *keys: int) -> "RngStream":
        """Derive an independent child stream."""
        return RngStream(self.seed, self.stream_id, (*self.path, *keys))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self.path})"


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class GammaSpec(_Spec):
    kind: Literal["gamma"] = "gamma"
    shape: float = Field(gt=0)
    scale: float = Field(gt=0)

    def mean(self) -> float:
        return self.shape * self.scale

    def variance(self) -> float:
        return self.shape * self.scale * self.scale


class LognormalSpec(_Spec):
    """Lognormal time; may be written with ``mean``/``variance`` instead of mu/sigma."""

    kind: Literal["lognormal"] = "lognormal"
    mu: float
    sigma: float = Field(ge=0)

    @model_validator(mode="before")
    @classmethod
    def from_moments(cls, data: Any) -> Any:
        if isinstance(data, dict) and ("mean" in data or "variance" in data):
            data = dict(data)
            mean = data.pop("mean", None)
            variance = data.pop("variance", None)
            if mean is None or variance is None:
                raise ValueError("lognormal moments need both mean and variance")
            try:
                data["mu"], data["sigma"] = lognormal_params_from_moments(
                    float(mean), float(variance)
                )
            except ParameterDomainError as e:
                raise ValueError(str(e)) from e
        return data

    def mean(self) -> float:
        return math.exp(self.mu + self.sigma**2 / 2.0)

    def variance(self) -> float:
        return math.expm1(self.sigma**2) * math.exp(2.0 * self.mu + self.sigma**2)


class ExponentialSpec(_Spec):
    kind: Literal["exponential"] = "exponential"
    rate: float = Field(gt=0)

    def mean(self) -> float:
        return 1.0 / self.rate

    def variance(self) -> float:
        return 1.0 / (self.rate * self.rate)


class DeterministicSpec(_Spec):
    kind: Literal["deterministic"] = "deterministic"
    value: float = Field(ge=0)

    def mean(self) -> float:
        return self.value

    def variance(self) -> float:
        return 0.0


DistributionSpec = Annotated[
    GammaSpec | LognormalSpec | ExponentialSpec | DeterministicSpec,
    Field(discriminator="kind"),
]


class InputModels(BaseModel):
    """Exogenous input models of the call center.

    Attributes:
        arrival_rate_per_epoch: Poisson arrival count per epoch, per contact group
        service: service-time distribution per contact group
        patience: patience distribution per contact group (None = never abandons)
        backoffice_duration: back-office task duration
    """

    model_config = ConfigDict(frozen=True)

    arrival_rate_per_epoch: list[Annotated[float, Field(ge=0)]] = Field(min_length=1)
    service: list[DistributionSpec]
    patience: list[DistributionSpec | None]
    backoffice_duration: DistributionSpec

    @model_validator(mode="after")
    def one_entry_per_group(self) -> "InputModels":
        n = len(self.arrival_rate_per_epoch)
        if len(self.service) != n or len(self.patience) != n:
            raise ValueError(
                "arrival_rate_per_epoch, service and patience need one entry per contact group"
            )
        return self
