"""Choosing auction parameters: the loss / fill-time efficient frontier.

Regular auctions minimise ``LVF(z0) + theta * FT(z0)`` over the starting
mispricing and the drift. GDAs minimise ``LVF_+ - theta * VOL`` over the
emission rate and the drift.

The solvers are nested one-dimensional searches: for each candidate starting
point the drift is optimised by bounded Brent search in ``log(delta)``; the
starting point itself is chosen from a coarse grid and then polished the same
way. Brute-force grids in the tests serve as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import analytic, bayes
from .params import ChainParams, DomainError, MarketParams

_XATOL = 1e-12
_Z_GRID = 41
_DELTA_GRID = 41


@dataclass(frozen=True)
class SearchBox:
    """Bounds for the drift (1/s), the starting log mispricing and the log
    ratio ``log(A0 / P_hat)`` used when the value is uncertain."""

    delta_min: float = 1e-7
    delta_max: float = 1e-2
    z_min: float = -0.05
    z_max: float = 0.0
    log_ask_min: float = -0.05
    log_ask_max: float = 0.05

    def __post_init__(self):
        if not 0 < self.delta_min < self.delta_max:
            raise DomainError("search box needs 0 < delta_min < delta_max")
        if not self.z_min <= self.z_max:
            raise DomainError("search box needs z_min <= z_max")
        if not self.log_ask_min <= self.log_ask_max:
            raise DomainError("search box needs log_ask_min <= log_ask_max")


@dataclass(frozen=True)
class FrontierPoint:
    theta: float
    z0: float
    delta: float
    lvf: float
    fill_time: float
    objective: float


@dataclass(frozen=True)
class PriorFrontierPoint:
    """Optimum under a lognormal value prior; ``lvf`` and ``fill_time`` are expectations."""

    theta: float
    ask0: float
    log_ask_ratio: float
    mu0: float
    delta: float
    lvf: float
    fill_time: float
    objective: float


@dataclass(frozen=True)
class GdaOptimum:
    theta: float
    emission_rate: float
    delta: float
    lam: float
    lvf_plus: float
    vol_rate: float
    objective: float


def _brent(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Bounded minimum of ``f`` on ``[lo, hi]``, endpoints included."""
    if hi <= lo:
        return lo, f(lo)
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": _XATOL})
    best = min((res.x, res.fun), (lo, f(lo)), (hi, f(hi)), key=lambda p: p[1])
    return float(best[0]), float(best[1])


def _minimize_over_delta(obj: Callable[[float], float], box: SearchBox) -> tuple[float, float]:
    """Minimise ``obj(delta)`` over ``[delta_min, delta_max]`` on a log scale.

    ``obj`` must accept an array of drifts.
    """
    lo, hi = math.log(box.delta_min), math.log(box.delta_max)
    grid = np.linspace(lo, hi, _DELTA_GRID)
    vals = np.asarray(obj(np.exp(grid)))
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, _DELTA_GRID - 1)]
    x, v = _brent(lambda x: float(obj(math.exp(x))), float(a), float(b))
    if vals[i] < v:
        x, v = float(grid[i]), float(vals[i])
    return math.exp(x), v


def _nested(
    obj: Callable[[float, float], float], outer_lo: float, outer_hi: float, box: SearchBox
) -> tuple[float, float, float]:
    """Minimise ``obj(outer, delta)``; returns ``(outer, delta, value)``."""

    def profile(u: float) -> float:
        return _minimize_over_delta(lambda d: obj(u, d), box)[1]

    if outer_hi <= outer_lo:
        d, v = _minimize_over_delta(lambda d: obj(outer_lo, d), box)
        return outer_lo, d, v
    grid = np.linspace(outer_lo, outer_hi, _Z_GRID)
    vals = [profile(float(u)) for u in grid]
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, _Z_GRID - 1)]
    u, _ = _brent(profile, float(a), float(b))
    if vals[i] < profile(u):
        u = float(grid[i])
    d, v = _minimize_over_delta(lambda d: obj(u, d), box)
    return u, d, v


def _check_theta(theta: float) -> None:
    if not (theta >= 0 and math.isfinite(theta)):
        raise DomainError(f"theta must be finite and >= 0, got {theta!r}")


def solve_known_value(
    theta: float, market: MarketParams, chain: ChainParams, box: SearchBox = SearchBox()
) -> FrontierPoint:
    """Best ``(z0, delta)`` for a seller who knows the current fair price.

    Starting above the fair price only lengthens the wait without changing the
    loss, so the search runs over ``z0 <= 0`` (or just ``z_min`` if the whole
    box is positive).
    """
    _check_theta(theta)
    sigma, dt = market.sigma, chain.dt

    def obj(z0: float, delta: float) -> float:
        return analytic.lvf(z0, delta, sigma, dt) + theta * analytic.fill_time(z0, delta, sigma, dt)

    z_hi = min(box.z_max, 0.0) if box.z_min <= 0 else box.z_min
    z0, delta, _ = _nested(obj, box.z_min, z_hi, box)
    loss = analytic.lvf(z0, delta, sigma, dt)
    ft = analytic.fill_time(z0, delta, sigma, dt)
    return FrontierPoint(theta, z0, delta, loss, ft, loss + theta * ft)


def frontier_sweep(
    thetas: Sequence[float],
    market: MarketParams,
    chain: ChainParams,
    box: SearchBox = SearchBox(),
) -> list[FrontierPoint]:
    thetas = list(thetas)
    if not thetas:
        raise DomainError("need at least one theta")
    if any(b < a for a, b in zip(thetas, thetas[1:])):
        raise DomainError("thetas must be sorted ascending")
    return [solve_known_value(t, market, chain, box) for t in thetas]


def solve_unknown_value(
    theta: float,
    prior_sigma0: float,
    value_mean: float,
    market: MarketParams,
    chain: ChainParams,
    box: SearchBox = SearchBox(),
) -> PriorFrontierPoint:
    """Best ``(A0, delta)`` when the fair price is lognormal with mean ``value_mean``."""
    _check_theta(theta)
    if not prior_sigma0 > 0:
        raise DomainError("prior_sigma0 must be > 0")
    if not value_mean > 0:
        raise DomainError("value_mean must be > 0")
    sigma, dt = market.sigma, chain.dt
    shift = 0.5 * prior_sigma0**2

    def parts(x: float, delta: float) -> tuple[float, float]:
        prior = bayes.MispricingPrior(x + shift, prior_sigma0)
        return (
            bayes.expected_lvf(prior, delta, sigma, dt),
            bayes.expected_fill_time(prior, delta, sigma, dt),
        )

    @np.vectorize
    def obj(x: float, delta: float) -> float:
        e_lvf, e_ft = parts(x, delta)
        return e_lvf + theta * e_ft

    x, delta, _ = _nested(obj, box.log_ask_min, box.log_ask_max, box)
    e_lvf, e_ft = parts(x, delta)
    return PriorFrontierPoint(
        theta,
        value_mean * math.exp(x),
        x,
        x + shift,
        delta,
        e_lvf,
        e_ft,
        e_lvf + theta * e_ft,
    )


def lvf_plus_closed(delta: float, sigma: float, dt: float) -> float:
    """``LVF_+`` extended continuously to ``delta = 0`` (the loss floor)."""
    if delta == 0:
        return analytic.lvf_lower_bound(sigma, dt)
    return analytic.lvf_plus(delta, sigma, dt)


def gda_objective(
    theta: float, delta: float, r: float, market: MarketParams, chain: ChainParams, price: float
) -> float:
    lam = delta - market.mu + 0.5 * market.sigma**2
    vol = price * r * delta / lam
    return lvf_plus_closed(delta, market.sigma, chain.dt) - theta * vol


def gda_delta_bounds(
    market: MarketParams, delta_box: tuple[float, float]
) -> tuple[float, float]:
    """Feasible drift interval: ``delta >= max(0, mu - sigma^2/2)`` with ``lam > 0``."""
    floor = market.mu - 0.5 * market.sigma**2
    lo = max(delta_box[0], 0.0, floor)
    hi = delta_box[1]
    if lo == floor:
        # lam = delta - floor must be strictly positive
        lo = floor + max(abs(floor), 1e-300) * 1e-12
    if lo > hi:
        raise DomainError("GDA drift box is infeasible: need delta >= max(0, mu - sigma^2/2), lam > 0")
    return lo, hi


def solve_gda(
    theta: float,
    market: MarketParams,
    chain: ChainParams,
    price: float,
    r_box: tuple[float, float],
    delta_box: tuple[float, float],
) -> GdaOptimum:
    """Minimise ``LVF_+ - theta * VOL`` over emission rate and drift.

    ``VOL`` is linear in ``r`` with a nonpositive coefficient, so ``r`` sits at
    the top of its box; what remains is a one-dimensional search over drift.
    """
    _check_theta(theta)
    r_lo, r_hi = r_box
    if not (0 <= r_lo <= r_hi and r_hi > 0):
        raise DomainError("emission rate box needs 0 <= r_min <= r_max, r_max > 0")
    if price <= 0:
        raise DomainError("price must be > 0")
    lo, hi = gda_delta_bounds(market, delta_box)
    r = r_hi

    def f(delta: float) -> float:
        return gda_objective(theta, delta, r, market, chain, price)

    # linear and geometric grids together cover boxes that start at zero
    grid = np.unique(
        np.concatenate(
            [
                np.linspace(lo, hi, 201),
                np.geomspace(max(lo, hi * 1e-9), hi, 201),
            ]
        )
    )
    vals = np.array([f(float(d)) for d in grid])
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    delta, v = _brent(f, float(a), float(b))
    if vals[i] < v:
        delta, v = float(grid[i]), float(vals[i])
    lam = delta - market.mu + 0.5 * market.sigma**2
    return GdaOptimum(
        theta,
        r,
        delta,
        lam,
        lvf_plus_closed(delta, market.sigma, chain.dt),
        price * r * delta / lam,
        v,
    )
