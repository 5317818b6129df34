"""Parameter types and unit conventions.

All rates are per second and all volatilities per square-root second. A day is
exactly 86400 seconds. Fractions are plain floats (0.0005 is 5 bp).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SECONDS_PER_DAY = 86400.0


class DomainError(ValueError):
    """Raised when inputs fall outside the region where a formula is valid."""


def _require_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class MarketParams:
    """GBM drift ``mu`` (per second) and volatility ``sigma`` (per sqrt-second)."""

    mu: float
    sigma: float

    def __post_init__(self):
        _require_finite(mu=self.mu, sigma=self.sigma)
        if self.sigma <= 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma!r}")

    @classmethod
    def from_daily(cls, mu: float, sigma_daily: float) -> MarketParams:
        return cls(mu=mu, sigma=convert_daily_vol(sigma_daily))


@dataclass(frozen=True)
class ChainParams:
    """Poisson block production with mean interblock time ``mean_interblock_time`` seconds."""

    mean_interblock_time: float

    def __post_init__(self):
        _require_finite(mean_interblock_time=self.mean_interblock_time)
        if self.mean_interblock_time <= 0:
            raise DomainError("mean_interblock_time must be > 0")

    @property
    def dt(self) -> float:
        return self.mean_interblock_time


@dataclass(frozen=True)
class AuctionSpec:
    """A regular Dutch auction: initial log mispricing ``z0`` and ask decay ``lam``.

    ``market`` is needed to check that the composite drift is positive, i.e.
    that the auction fills almost surely with finite expected fill time.
    """

    z0: float
    lam: float
    market: MarketParams

    def __post_init__(self):
        _require_finite(z0=self.z0, lam=self.lam)
        if self.lam <= 0:
            raise DomainError(f"decay rate must be > 0, got {self.lam!r}")
        if self.delta <= 0:
            raise DomainError(
                f"Assumption 1 violated: delta = lambda + mu - sigma^2/2 = {self.delta!r} <= 0"
            )

    @property
    def delta(self) -> float:
        return composite_drift(self.market, self.lam)


@dataclass(frozen=True)
class GdaSpec:
    """Continuous gradual Dutch auction emitting ``emission_rate`` units/second.

    ``price`` is the current fundamental price P that the arbitrage profit and
    volume rates are conditioned on.
    """

    emission_rate: float
    lam: float
    price: float

    def __post_init__(self):
        _require_finite(emission_rate=self.emission_rate, lam=self.lam, price=self.price)
        for name in ("emission_rate", "lam", "price"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}")

    def delta(self, market: MarketParams) -> float:
        d = composite_drift(market, self.lam)
        if d < 0:
            raise DomainError(f"GDA requires delta >= 0, got {d!r}")
        return d


def composite_drift(market: MarketParams, lam: float) -> float:
    """Downward drift of the log mispricing, ``lam + mu - sigma**2 / 2``."""
    return lam + market.mu - 0.5 * market.sigma**2


def convert_daily_vol(sigma_daily: float) -> float:
    """Convert a per-sqrt-day volatility to per-sqrt-second."""
    if not sigma_daily >= 0:
        raise DomainError(f"volatility must be >= 0, got {sigma_daily!r}")
    return sigma_daily / math.sqrt(SECONDS_PER_DAY)


def lam_for_delta(market: MarketParams, delta: float) -> float:
    """Inverse of :func:`composite_drift`: the decay rate giving drift ``delta``."""
    return delta - market.mu + 0.5 * market.sigma**2
