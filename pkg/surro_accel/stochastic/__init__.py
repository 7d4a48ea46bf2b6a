from surro_accel.stochastic.sampling import (
    fit_input_models,
    sample,
    sample_arrival_counts,
    sample_arrivals,
    sample_exponential,
    sample_gamma,
    sample_lognormal,
)
from surro_accel.stochastic.types import (
    DeterministicSpec,
    DistributionSpec,
    ExponentialSpec,
    GammaSpec,
    InputModels,
    LognormalSpec,
    RngStream,
)
from surro_accel.stochastic.utils import lognormal_params_from_moments

__all__ = [
    "DeterministicSpec",
    "DistributionSpec",
    "ExponentialSpec",
    "GammaSpec",
    "InputModels",
    "LognormalSpec",
    "RngStream",
    "fit_input_models",
    "lognormal_params_from_moments",
    "sample",
    "sample_arrival_counts",
    "sample_arrivals",
    "sample_exponential",
    "sample_gamma",
    "sample_lognormal",
]
