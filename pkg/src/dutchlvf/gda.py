"""Continuous gradual Dutch auctions: cost curve, myopic arbitrage, steady-state rates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .params import ChainParams, DomainError, GdaSpec, MarketParams

# exp() argument beyond which the cost curve is reported as overflowing
_MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class ArbAction:
    quantity: float
    profit: float


@dataclass(frozen=True)
class GdaRates:
    """Arbitrage profit and numeraire volume per second."""

    arb_rate: float
    vol_rate: float

    @property
    def loss_per_volume(self) -> float:
        return self.arb_rate / self.vol_rate if self.vol_rate > 0 else math.nan


def gda_cost(q: float, ask: float, spec: GdaSpec) -> float:
    """Numeraire cost of buying ``q`` units when the best ask is ``ask``.

    Buying walks back through younger (pricier) auctions, so the cost is
    ``ask * (r/lam) * (exp(lam q / r) - 1)``.
    """
    if q < 0:
        raise DomainError(f"quantity must be >= 0, got {q!r}")
    if ask <= 0:
        raise DomainError(f"ask must be > 0, got {ask!r}")
    r, lam = spec.emission_rate, spec.lam
    x = lam * q / r
    if x > _MAX_EXPONENT:
        raise OverflowError(f"lam*q/r = {x:.6g} exceeds {_MAX_EXPONENT}")
    return ask * (r / lam) * math.expm1(x)


def expm1_minus_x(z):
    """``exp(z) - 1 - z`` without cancellation for small ``|z|``; accepts arrays."""
    z = np.asarray(z, dtype=float)
    # Horner form of z^2/2 + z^3/6 + ... + z^6/720, truncation error < |z|^7/5040
    series = z * z * (0.5 + z * (1 / 6 + z * (1 / 24 + z * (1 / 120 + z / 720))))
    out = np.where(np.abs(z) < 1e-3, series, np.expm1(z) - z)
    return float(out) if out.ndim == 0 else out


def myopic_arb(z: float, spec: GdaSpec) -> ArbAction:
    """Profit-maximising purchase at a block with pre-block mispricing ``z``.

    The arbitrageur buys until the marginal auction price equals ``spec.price``:
    ``q = -(r/lam) z`` for ``z <= 0`` and nothing otherwise.
    """
    if not math.isfinite(z):
        raise DomainError(f"mispricing must be finite, got {z!r}")
    if z >= 0:
        return ArbAction(0.0, 0.0)
    scale = spec.emission_rate / spec.lam
    return ArbAction(-scale * z, spec.price * scale * expm1_minus_x(z))


def arb_profit(q: float, z: float, spec: GdaSpec) -> float:
    """Profit ``P q - C(q)`` of buying ``q`` units at mispricing ``z``."""
    return spec.price * q - gda_cost(q, spec.price * math.exp(z), spec)


def gda_rates(spec: GdaSpec, market: MarketParams, chain: ChainParams) -> GdaRates:
    delta = spec.delta(market)
    vol = spec.price * spec.emission_rate * delta / spec.lam
    if delta == 0:
        return GdaRates(0.0, 0.0)
    return GdaRates(vol * analytic.lvf_plus(delta, market.sigma, chain.dt), vol)
