"""Samplers over RngStream and the Poisson input-model fit."""

from collections.abc import Sequence

import numpy as np

from surro_accel.errors import InsufficientDataError, ParameterDomainError
from surro_accel.stochastic.types import (
    DeterministicSpec,
    DistributionSpec,
    ExponentialSpec,
    GammaSpec,
    InputModels,
    LognormalSpec,
    RngStream,
)


def sample_gamma(stream: RngStream, shape: float, scale: float) -> float:
    """One Gamma(shape, scale) draw, mean shape * scale.

    numpy's generator uses Marsaglia-Tsang rejection for shape >= 1 and the
    boost transform for shape < 1.
    """
    if not (shape > 0 and scale > 0):
        raise ParameterDomainError(
            f"gamma parameters must be positive (shape={shape}, scale={scale})"
        )
    return float(stream.generator.gamma(shape, scale))


def sample_lognormal(stream: RngStream, mu: float, sigma: float) -> float:
    if sigma < 0:
        raise ParameterDomainError(f"lognormal sigma must be >= 0 (sigma={sigma})")
    return float(stream.generator.lognormal(mu, sigma))


def sample_exponential(stream: RngStream, rate: float) -> float:
    if not rate > 0:
        raise ParameterDomainError(f"exponential rate must be positive (rate={rate})")
    return float(stream.generator.exponential(1.0 / rate))


def sample(spec: DistributionSpec, stream: RngStream) -> float:
    """Draw one value from any DistributionSpec."""
    match spec:
        case GammaSpec(shape=shape, scale=scale):
            return sample_gamma(stream, shape, scale)
        case LognormalSpec(mu=mu, sigma=sigma):
            return sample_lognormal(stream, mu, sigma)
        case ExponentialSpec(rate=rate):
            return sample_exponential(stream, rate)
        case DeterministicSpec(value=value):
            return value
    raise TypeError(f"unsupported distribution spec: {spec!r}")


def sample_arrivals(
    stream: RngStream, rate_per_epoch: float, epoch_length: float
) -> list[float]:
    """Arrival times of a homogeneous Poisson process over one epoch.

    The count is Poisson(rate_per_epoch); given the count, times are i.i.d.
    uniform on [0, epoch_length) and returned in ascending order.
    """
    if rate_per_epoch < 0:
        raise ParameterDomainError(f"arrival rate must be >= 0 (rate={rate_per_epoch})")
    if rate_per_epoch == 0:
        return []
    count = int(stream.generator.poisson(rate_per_epoch))
    times = np.sort(stream.generator.uniform(0.0, epoch_length, size=count))
    return times.tolist()


def sample_arrival_counts(models: InputModels, stream: RngStream) -> list[int]:
    """One epoch of arrival counts per contact group."""
    return [
        int(stream.generator.poisson(rate)) if rate > 0 else 0
        for rate in models.arrival_rate_per_epoch
    ]


def fit_input_models(
    arrival_counts: Sequence[Sequence[int]],
    service: Sequence[DistributionSpec],
    patience: Sequence[DistributionSpec | None],
    backoffice_duration: DistributionSpec,
) -> InputModels:
    """Fit Poisson arrival rates from recorded per-epoch counts.

    The rate MLE of each contact group is its mean count per epoch. Service,
    patience and back-office models are carried over from the configuration.

    Args:
        arrival_counts: one row per recorded epoch, one column per contact group
        service: configured service distributions
        patience: configured patience distributions
        backoffice_duration: configured back-office duration

    Raises:
        InsufficientDataError: no recorded epoch
    """
    counts = np.asarray(arrival_counts, dtype=float)
    if counts.ndim != 2 or counts.shape[0] == 0:
        raise InsufficientDataError("at least one recorded epoch is needed to fit arrival rates")
    if counts.shape[1] != len(service):
        raise InsufficientDataError(
            f"recorded counts cover {counts.shape[1]} contact groups, configuration has {len(service)}"
        )
    return InputModels(
        arrival_rate_per_epoch=counts.mean(axis=0).tolist(),
        service=list(service),
        patience=list(patience),
        backoffice_duration=backoffice_duration,
    )
