import math

from surro_accel.errors import ParameterDomainError


def lognormal_params_from_moments(mean: float, variance: float) -> tuple[float, float]:
    """Return (mu, sigma) of the lognormal with the given mean and variance.

    sigma^2 = ln(1 + variance / mean^2) and mu = ln(mean) - sigma^2 / 2.

    Args:
        mean: target mean, > 0
        variance: target variance, > 0

    Raises:
        ParameterDomainError: mean or variance is not strictly positive
    """
    if not (mean > 0 and variance > 0):
        raise ParameterDomainError(
            f"lognormal moments must be positive (mean={mean}, variance={variance})"
        )
    sigma2 = math.log1p(variance / (mean * mean))
    return math.log(mean) - sigma2 / 2.0, math.sqrt(sigma2)
