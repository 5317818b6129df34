"""Expected loss and fill time when the initial mispricing has a normal prior.

If the seller believes ``P0 = P_hat * exp(-sigma0^2/2 + sigma0 Z)`` with
``Z ~ N(0, 1)``, the initial log mispricing of an auction started at ``A0`` is
``z0 ~ N(log(A0/P_hat) + sigma0^2/2, sigma0^2)``. Integrating the piecewise
closed forms of :mod:`dutchlvf.analytic` against that density gives the
expressions below.

Products of the form ``exp(E) * Phi(x)`` with a large ``E`` and a far-left
``x`` are combined as ``exp(E + log Phi(x))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import log_ndtr, ndtr

from . import analytic
from .params import DomainError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class MispricingPrior:
    """Normal prior ``N(mu0, sigma0**2)`` on the initial log mispricing."""

    mu0: float
    sigma0: float

    def __post_init__(self):
        if not (math.isfinite(self.mu0) and math.isfinite(self.sigma0)):
            raise DomainError("prior parameters must be finite")
        if self.sigma0 <= 0:
            raise DomainError(f"sigma0 must be > 0, got {self.sigma0!r}")


def prior_from_value_belief(ask0: float, value_mean: float, sigma0: float) -> MispricingPrior:
    """Prior on ``z0`` for an auction starting at ``ask0`` when the fair value is
    lognormal with mean ``value_mean`` and log-volatility ``sigma0``."""
    if ask0 <= 0 or value_mean <= 0:
        raise DomainError("ask0 and value_mean must be > 0")
    return MispricingPrior(math.log(ask0 / value_mean) + 0.5 * sigma0**2, sigma0)


def _exp_times_cdf(exponent: float, x: float) -> float:
    return math.exp(exponent + float(log_ndtr(x)))


def expected_lvf(prior: MispricingPrior, delta: float, sigma: float, dt: float) -> float:
    lvf_p = analytic.lvf_plus(delta, sigma, dt)
    mu0, s0 = prior.mu0, prior.sigma0
    rate = 1.0 / dt
    denom = 0.5 * sigma**2 - delta - rate
    if denom >= 0:
        # denom = -(1 + dt*(delta - sigma^2/2)) / dt; the z0 < 0 closed form needs it < 0
        raise DomainError("requires sigma^2/2 - delta - 1/dt < 0")
    s_plus_1 = analytic.zeta_backward(delta, sigma, dt) * sigma**2 / delta

    out = lvf_p + (1.0 - lvf_p) * float(ndtr(-mu0 / s0))
    out += rate / denom * _exp_times_cdf(0.5 * s0**2 + mu0, -s0 - mu0 / s0)

    coef = lvf_p - (0.5 * sigma**2 - delta) / denom
    g = delta / sigma**2
    exponent = rate * s0**2 / sigma**2 + g * (g * s0**2 + mu0) * s_plus_1
    out += coef * _exp_times_cdf(exponent, -g * s0 * s_plus_1 - mu0 / s0)
    return out


def expected_fill_time(prior: MispricingPrior, delta: float, sigma: float, dt: float) -> float:
    ft0 = analytic.fill_time(0.0, delta, sigma, dt)
    mu0, s0 = prior.mu0, prior.sigma0
    rate = 1.0 / dt
    excess = ft0 - dt

    out = dt + s0 / (delta * _SQRT_2PI) * math.exp(-(mu0**2) / (2.0 * s0**2))
    out += (excess + mu0 / delta) * float(ndtr(mu0 / s0))
    exponent = (
        2.0 * rate * ft0 * (s0**2 * delta**2 / sigma**4 + mu0 * delta / sigma**2)
        + rate * s0**2 / sigma**2
    )
    x = -2.0 * rate * ft0 * s0 * delta / sigma**2 - mu0 / s0
    out += excess * _exp_times_cdf(exponent, x)
    return out
