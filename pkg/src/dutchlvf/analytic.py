"""Closed forms for a regular Dutch auction under GBM prices and Poisson blocks.

Functions accept floats or numpy arrays (broadcast together) and return a
float for scalar input. Parameters everywhere:

delta
    composite drift ``lambda + mu - sigma**2/2`` of the log mispricing, 1/s
sigma
    price volatility, 1/sqrt(s)
dt
    mean interblock time, s

The square root ``sqrt(1 + 2 sigma^2 / (delta^2 dt))`` that appears in every
formula is evaluated as ``hypot(delta, sigma*sqrt(2/dt)) / delta`` and the
differences built from it are rearranged so that nothing cancels when the ratio
``sigma^2 / (delta^2 dt)`` is tiny.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DomainError


@dataclass(frozen=True)
class StationaryDist:
    """Two-sided exponential law of the mispricing between blocks.

    Density ``pi_minus * zeta_minus * exp(zeta_minus * z)`` for z < 0 and
    ``pi_plus * zeta_plus * exp(-zeta_plus * z)`` for z >= 0.
    """

    zeta_minus: float
    zeta_plus: float
    pi_minus: float
    pi_plus: float

    def pdf(self, z):
        z = np.asarray(z, dtype=float)
        neg = self.pi_minus * self.zeta_minus * np.exp(self.zeta_minus * np.minimum(z, 0.0))
        pos = self.pi_plus * self.zeta_plus * np.exp(-self.zeta_plus * np.maximum(z, 0.0))
        return _out(np.where(z < 0, neg, pos))

    def cdf(self, z):
        z = np.asarray(z, dtype=float)
        neg = self.pi_minus * np.exp(self.zeta_minus * np.minimum(z, 0.0))
        pos = self.pi_minus + self.pi_plus * -np.expm1(-self.zeta_plus * np.maximum(z, 0.0))
        return _out(np.where(z < 0, neg, pos))


@dataclass(frozen=True)
class AuctionOutcome:
    lvf: float
    fill_time: float


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check(**kw) -> None:
    for name, v in kw.items():
        v = np.asarray(v, dtype=float)
        if not np.all(np.isfinite(v)):
            raise DomainError(f"{name} must be finite")
        if not np.all(v > 0):
            if name == "delta":
                raise DomainError(
                    "Assumption 1 violated: delta = lambda + mu - sigma^2/2 must be > 0"
                )
            raise DomainError(f"{name} must be > 0")


def _root(delta, sigma, dt):
    # sqrt(delta^2 + 2 sigma^2 / dt) without overflow
    return np.hypot(delta, sigma * np.sqrt(2.0 / dt))


def zeta_minus(delta, sigma, dt):
    """Rate of the negative branch of the stationary law.

    Equal to ``(delta/sigma^2) * (sqrt(1 + 2 sigma^2/(delta^2 dt)) - 1)``.
    """
    delta, sigma, dt = np.broadcast_arrays(*map(np.asarray, (delta, sigma, dt)))
    return _out(2.0 / (dt * (delta + _root(delta, sigma, dt))))


def zeta_backward(delta, sigma, dt):
    """Decay rate in z0 of LVF(z0) and FT(z0) on the in-the-money side (z0 < 0).

    This is the positive root of ``sigma^2 k^2 / 2 - delta k - 1/dt = 0``,
    ``(delta/sigma^2) * (sqrt(1 + 2 sigma^2/(delta^2 dt)) + 1)``, which equals
    ``zeta_minus + 2 delta / sigma^2``.
    """
    delta, sigma, dt = np.broadcast_arrays(*map(np.asarray, (delta, sigma, dt)))
    return _out((delta + _root(delta, sigma, dt)) / sigma**2)


def stationary_distribution(delta: float, sigma: float, dt: float) -> StationaryDist:
    _check(delta=delta, sigma=sigma, dt=dt)
    root = float(_root(delta, sigma, dt))
    zm = 2.0 / (dt * (delta + root))
    zp = 2.0 * delta / sigma**2
    if not np.isfinite(zp):
        raise DomainError("zeta_plus overflows: sigma^2 too small relative to delta")
    pi_minus = 2.0 * delta / (delta + root)
    return StationaryDist(zm, zp, pi_minus, (root - delta) / (delta + root))


def lvf_plus(delta, sigma, dt):
    """Loss-versus-fair of an auction started at or above the fair price."""
    _check(delta=delta, sigma=sigma, dt=dt)
    return _out(1.0 / (1.0 + np.asarray(zeta_minus(delta, sigma, dt))))


def lvf(z0, delta, sigma, dt):
    """Expected relative loss ``E[1 - exp(z_fill)]`` of an auction started at ``z0``."""
    _check(delta=delta, sigma=sigma, dt=dt)
    z0, delta, sigma, dt = np.broadcast_arrays(*map(np.asarray, (z0, delta, sigma, dt)))
    z0 = z0.astype(float)
    plus = 1.0 / (1.0 + np.asarray(zeta_minus(delta, sigma, dt)))
    neg = z0 < 0
    if not np.any(neg):
        return _out(plus)
    a = dt * (delta - 0.5 * sigma**2)
    if np.any((1.0 + a)[neg] <= 0):
        raise DomainError("z0 < 0 branch requires 1 + dt*(delta - sigma^2/2) > 0")
    zn = np.minimum(z0, 0.0)
    k = np.asarray(zeta_backward(delta, sigma, dt))
    with np.errstate(divide="ignore", invalid="ignore"):
        first = (a - np.expm1(zn)) / (1.0 + a)
        minus = first + (plus - a / (1.0 + a)) * np.exp(k * zn)
    return _out(np.where(neg, minus, plus))


def fill_time(z0, delta, sigma, dt):
    """Expected time in seconds until the first block with ask at or below fair."""
    _check(delta=delta, sigma=sigma, dt=dt)
    z0, delta, sigma, dt = np.broadcast_arrays(*map(np.asarray, (z0, delta, sigma, dt)))
    z0 = z0.astype(float)
    root = _root(delta, sigma, dt)
    # FT(0) - dt = (dt/2)(sqrt(1 + 2 sigma^2/(delta^2 dt)) - 1)
    excess = sigma**2 / (delta * (delta + root))
    k = (delta + root) / sigma**2
    pos = z0 / delta + dt + excess
    neg = dt + excess * np.exp(k * np.minimum(z0, 0.0))
    return _out(np.where(z0 < 0, neg, pos))


def fill_time_zero(delta, sigma, dt):
    """``fill_time(0, ...)``: ``(dt/2) * (1 + sqrt(1 + 2 sigma^2/(delta^2 dt)))``."""
    return fill_time(0.0, delta, sigma, dt)


def outcome(z0: float, delta: float, sigma: float, dt: float) -> AuctionOutcome:
    return AuctionOutcome(lvf(z0, delta, sigma, dt), fill_time(z0, delta, sigma, dt))


def lvf_lower_bound(sigma, dt):
    """Loss floor ``1 / (1 + 1/(sigma sqrt(dt/2)))`` reached as delta -> 0."""
    _check(sigma=sigma, dt=dt)
    x = np.asarray(sigma) * np.sqrt(np.asarray(dt) / 2.0)
    return _out(x / (1.0 + x))


def max_block_time_for_loss(target_lvf: float, sigma: float) -> float:
    """Largest mean block time whose loss floor does not exceed ``target_lvf``."""
    _check(sigma=sigma)
    if not 0 < target_lvf < 1:
        raise DomainError(f"target loss must lie in (0, 1), got {target_lvf!r}")
    ratio = target_lvf / (1.0 - target_lvf)
    return 2.0 * ratio**2 / sigma**2
