"""Exact Monte Carlo for the mispricing process observed at Poisson block times.

Between blocks the log mispricing is a Brownian motion with drift ``-delta``,
so a block-to-block transition is sampled exactly: an exponential gap ``tau``
and a Gaussian increment ``N(-delta tau, sigma^2 tau)``. There is no step size.

Randomness comes from counter-based Philox streams keyed by ``(seed, stream,
chunk)``. Paths are processed in fixed chunks of :data:`CHUNK` so the stream a
path draws from depends only on the seed and the path index. Results are
therefore bit-identical for any number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gda import expm1_minus_x
from .params import ChainParams, DomainError, GdaSpec, MarketParams

CHUNK = 4096

# stream tags, so different estimators never share random numbers
_DUTCH, _BURN_IN, _STATIONARY = 1, 2, 3


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo settings.

    ``paths`` is the number of auction paths for :func:`simulate_dutch` and the
    number of independent chains for the stationary estimators, each of which
    records ``blocks_per_chain`` pre-block samples after ``burn_in_blocks``.
    ``workers`` only changes wall-clock time, never the result.
    """

    paths: int = 100_000
    seed: int = 0
    burn_in_blocks: int = 10_000
    max_blocks_per_path: int = 1_000_000
    blocks_per_chain: int = 1_000
    workers: int = 1

    def __post_init__(self):
        if self.paths < 1 or self.max_blocks_per_path < 1 or self.blocks_per_chain < 1:
            raise ValueError("paths, max_blocks_per_path and blocks_per_chain must be >= 1")
        if self.burn_in_blocks < 0:
            raise ValueError("burn_in_blocks must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class PathState:
    """Mispricing ``z``, elapsed time ``t`` and ``log_price``; scalars or arrays."""

    z: np.ndarray | float
    t: np.ndarray | float = 0.0
    log_price: np.ndarray | float = 0.0


@dataclass(frozen=True)
class SimResult:
    mean: float
    std_error: float
    samples: int
    truncated: int = 0

    def z_score(self, expected: float) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean == expected else math.copysign(math.inf, self.mean - expected)
        return (self.mean - expected) / self.std_error


@dataclass(frozen=True)
class StationarySummary:
    pi_minus: SimResult
    mean_neg_excursion: SimResult
    mean_pos_excursion: SimResult
    hist_counts: np.ndarray
    hist_edges: np.ndarray
    samples: np.ndarray = field(repr=False)


def stream(seed: int, tag: int, index: int) -> np.random.Generator:
    """Independent Philox generator for one (seed, tag, index) triple."""
    key = np.array([seed, (tag << 48) | index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def step_to_next_block(
    state: PathState,
    delta: float,
    sigma: float,
    dt: float,
    rng: np.random.Generator,
    mu: float = 0.0,
) -> PathState:
    """Advance to the next block, just before any trade in it.

    The same Gaussian drives ``z`` and ``log_price``; the ask is deterministic
    so both see one Brownian motion.
    """
    shape = np.shape(state.z)
    tau = rng.exponential(dt, size=shape)
    dw = np.sqrt(tau) * rng.standard_normal(size=shape)
    return PathState(
        z=state.z - delta * tau + sigma * dw,
        t=state.t + tau,
        log_price=state.log_price + (mu - 0.5 * sigma**2) * tau + sigma * dw,
    )


def _summarize(values: np.ndarray, truncated: int = 0) -> SimResult:
    n = values.size
    if n == 0:
        return SimResult(math.nan, math.nan, 0, truncated)
    se = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return SimResult(float(np.mean(values)), se, n, truncated)


def _map_chunks(fn, n_items: int, workers: int) -> list:
    starts = range(0, n_items, CHUNK)
    jobs = [(i, s, min(CHUNK, n_items - s)) for i, s in enumerate(starts)]
    if workers == 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def _check_params(delta: float, sigma: float, dt: float, allow_zero_delta: bool = False) -> None:
    if not (delta > 0 or (allow_zero_delta and delta == 0)):
        raise DomainError(
            "Assumption 1 violated: delta = lambda + mu - sigma^2/2 must be > 0"
        )
    if sigma < 0 or dt <= 0:
        raise DomainError("sigma must be >= 0 and dt > 0")


def simulate_dutch(
    z0: float, delta: float, sigma: float, dt: float, cfg: SimConfig
) -> tuple[SimResult, SimResult]:
    """Estimate loss-versus-fair and fill time of an auction started at ``z0``.

    Each path runs block by block until the first block with ``z <= 0``, where
    it records ``1 - exp(z)`` and the elapsed time. Paths still unfilled after
    ``max_blocks_per_path`` blocks are excluded and counted in ``truncated``.
    """
    _check_params(delta, sigma, dt)

    def run(chunk: int, start: int, n: int):
        rng = stream(cfg.seed, _DUTCH, chunk)
        state = PathState(z=np.full(n, float(z0)), t=np.zeros(n))
        idx = np.arange(n)
        loss = np.empty(n)
        fill = np.empty(n)
        done = np.zeros(n, dtype=bool)
        for _ in range(cfg.max_blocks_per_path):
            if idx.size == 0:
                break
            state = step_to_next_block(state, delta, sigma, dt, rng)
            hit = state.z <= 0
            if hit.any():
                loss[idx[hit]] = -np.expm1(state.z[hit])
                fill[idx[hit]] = state.t[hit]
                done[idx[hit]] = True
                keep = ~hit
                idx = idx[keep]
                state = PathState(state.z[keep], state.t[keep], state.log_price[keep])
        return loss[done], fill[done], int(idx.size)

    parts = _map_chunks(run, cfg.paths, cfg.workers)
    losses = np.concatenate([p[0] for p in parts])
    fills = np.concatenate([p[1] for p in parts])
    truncated = sum(p[2] for p in parts)
    return _summarize(losses, truncated), _summarize(fills, truncated)


def stationary_samples(delta: float, sigma: float, dt: float, cfg: SimConfig) -> np.ndarray:
    """Pre-block mispricings ``z_{tau-}``, shape ``(chains, blocks_per_chain)``.

    Every chain starts at 0, runs ``burn_in_blocks`` blocks on its own burn-in
    stream, then records. Recording draws from a separate stream, so runs that
    differ only in burn-in share the recorded noise and couple once a trade
    resets both chains to 0.
    """
    _check_params(delta, sigma, dt, allow_zero_delta=True)

    def run(chunk: int, start: int, n: int):
        state = PathState(z=np.zeros(n))
        rng = stream(cfg.seed, _BURN_IN, chunk)
        for _ in range(cfg.burn_in_blocks):
            state = step_to_next_block(state, delta, sigma, dt, rng)
            state.z = np.maximum(state.z, 0.0)
        rng = stream(cfg.seed, _STATIONARY, chunk)
        out = np.empty((n, cfg.blocks_per_chain))
        for j in range(cfg.blocks_per_chain):
            state = step_to_next_block(state, delta, sigma, dt, rng)
            out[:, j] = state.z
            state.z = np.maximum(state.z, 0.0)
        return out

    return np.concatenate(_map_chunks(run, cfg.paths, cfg.workers), axis=0)


def _chain_mean(per_sample: np.ndarray) -> SimResult:
    """Mean over all samples with a standard error from per-chain batch means."""
    chain_means = per_sample.mean(axis=1)
    c = chain_means.size
    se = float(np.std(chain_means, ddof=1) / math.sqrt(c)) if c > 1 else math.inf
    return SimResult(float(chain_means.mean()), se, int(per_sample.size))


def _chain_ratio(num: np.ndarray, den: np.ndarray) -> SimResult:
    """Ratio estimator ``sum(num)/sum(den)`` with delta-method chain-level error."""
    s, n = num.sum(axis=1), den.sum(axis=1)
    c = s.size
    ratio = float(s.sum() / n.sum())
    if c > 1:
        resid = s - ratio * n
        se = float(math.sqrt(np.sum(resid**2) / (c * (c - 1))) / n.mean())
    else:
        se = math.inf
    return SimResult(ratio, se, int(n.sum()))


def sample_stationary(
    delta: float, sigma: float, dt: float, cfg: SimConfig, bins: int = 60
) -> StationarySummary:
    """Empirical stationary law: mass below zero and the mean excursion on each side.

    The mean of ``-z`` given ``z < 0`` estimates ``1/zeta_minus`` and the mean of
    ``z`` given ``z >= 0`` estimates ``1/zeta_plus``.
    """
    z = stationary_samples(delta, sigma, dt, cfg)
    neg = z < 0
    counts, edges = np.histogram(z, bins=bins)
    return StationarySummary(
        pi_minus=_chain_mean(neg.astype(float)),
        mean_neg_excursion=_chain_ratio(np.where(neg, -z, 0.0), neg.astype(float)),
        mean_pos_excursion=_chain_ratio(np.where(neg, 0.0, z), (~neg).astype(float)),
        hist_counts=counts,
        hist_edges=edges,
        samples=z,
    )


TEST_FUNCTIONS = ("f_minus", "f_plus", "const")


def generator_applied(
    z: np.ndarray, test_fn_id: str, alpha: float, delta: float, sigma: float, dt: float
) -> np.ndarray:
    """Generator of the jump diffusion applied to a test function, evaluated at ``z``.

    ``(Af)(z) = sigma^2/2 f''(z) - delta f'(z) + (f(0) - f(z)) / dt * 1{z < 0}``
    """
    z = np.asarray(z, dtype=float)
    neg = z < 0
    if test_fn_id == "const":
        return np.zeros_like(z)
    if test_fn_id == "f_minus":
        # exp(alpha z) below zero, 1 + alpha z above
        e = np.exp(alpha * np.minimum(z, 0.0))
        below = 0.5 * sigma**2 * alpha**2 * e - delta * alpha * e + (1.0 - e) / dt
        return np.where(neg, below, -delta * alpha)
    if test_fn_id == "f_plus":
        # exp(-alpha z) above zero, 1 - alpha z below
        e = np.exp(-alpha * np.maximum(z, 0.0))
        above = 0.5 * sigma**2 * alpha**2 * e + delta * alpha * e
        return np.where(neg, delta * alpha + alpha * z / dt, above)
    raise ValueError(f"unknown test function {test_fn_id!r}; expected one of {TEST_FUNCTIONS}")


def generator_residual(
    delta: float, sigma: float, dt: float, test_fn_id: str, alpha: float, cfg: SimConfig
) -> SimResult:
    """Stationary average of the generator applied to a test function; zero in expectation."""
    if test_fn_id not in TEST_FUNCTIONS:
        raise ValueError(f"unknown test function {test_fn_id!r}; expected one of {TEST_FUNCTIONS}")
    if test_fn_id != "const" and not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    if test_fn_id == "f_plus" and not alpha < 2.0 * delta / sigma**2:
        raise ValueError("f_plus requires alpha < zeta_plus = 2 delta / sigma^2")
    z = stationary_samples(delta, sigma, dt, cfg)
    return _chain_mean(generator_applied(z, test_fn_id, alpha, delta, sigma, dt))


def simulate_gda(
    spec: GdaSpec, market: MarketParams, chain: ChainParams, cfg: SimConfig
) -> tuple[SimResult, SimResult]:
    """Arbitrage profit rate and numeraire volume rate of a GDA at price ``spec.price``.

    At each recorded block the myopic trade against pre-block mispricing ``z``
    earns ``(P r/lam)(exp(z) - 1 - z)`` on volume ``P (r/lam)(-z)``; the block
    averages divided by the mean interblock time are the per-second rates.
    """
    delta = spec.delta(market)
    z = stationary_samples(delta, market.sigma, chain.dt, cfg)
    scale = spec.price * spec.emission_rate / spec.lam
    zn = np.minimum(z, 0.0)
    arb = _chain_mean(scale * expm1_minus_x(zn) / chain.dt)
    vol = _chain_mean(-scale * zn / chain.dt)
    return arb, vol


__all__ = [
    "CHUNK",
    "PathState",
    "SimConfig",
    "SimResult",
    "StationarySummary",
    "generator_applied",
    "generator_residual",
    "sample_stationary",
    "simulate_dutch",
    "simulate_gda",
    "stationary_samples",
    "step_to_next_block",
    "stream",
]
