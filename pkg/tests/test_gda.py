import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from dutchlvf import analytic, gda, mcsim
from dutchlvf.params import ChainParams, DomainError, GdaSpec, MarketParams

from .conftest import DT, SIGMA_5PCT

# 40-digit mpmath values
COST_1000 = 1051.709180756476248
ARB_1PCT = 0.4983374916805357


def spec(r=1.0, lam=1e-4, price=1.0):
    return GdaSpec(r, lam, price)


def test_cost_example():
    assert gda.gda_cost(1000.0, 1.0, spec()) == pytest.approx(COST_1000, rel=1e-13)
    assert gda.gda_cost(0.0, 1.0, spec()) == 0.0


@given(st.floats(0, 1e4), st.floats(0.1, 10), st.floats(0.1, 100), st.floats(1e-6, 1e-2))
def test_cost_matches_integral_of_marginal_price(q, ask, r, lam):
    # the unit bought at cumulative quantity x was emitted x/r seconds earlier
    s = spec(r, lam)
    if lam * q / r > 50:
        return
    oracle = quad(lambda x: ask * math.exp(lam * x / r), 0, q, epsrel=1e-13)[0]
    assert gda.gda_cost(q, ask, s) == pytest.approx(oracle, rel=1e-10, abs=1e-300)


def test_cost_overflow_and_domain():
    with pytest.raises(OverflowError):
        gda.gda_cost(1e7, 1.0, spec(r=1.0, lam=1e-4))
    with pytest.raises(DomainError):
        gda.gda_cost(-1.0, 1.0, spec())
    with pytest.raises(DomainError):
        gda.gda_cost(1.0, 0.0, spec())


def test_cost_homogeneity():
    # scaling quantity and emission rate together scales cost by the same factor
    s1, s2 = spec(r=2.0), spec(r=6.0)
    assert gda.gda_cost(300.0, 1.3, s2) == pytest.approx(3 * gda.gda_cost(100.0, 1.3, s1), rel=1e-13)
    assert gda.gda_cost(100.0, 2.6, s1) == pytest.approx(2 * gda.gda_cost(100.0, 1.3, s1), rel=1e-13)


def test_cost_convex_in_quantity():
    q = np.linspace(0, 5000, 2001)
    c = np.array([gda.gda_cost(x, 1.0, spec()) for x in q])
    assert np.all(np.diff(c, 2) > 0)


def test_myopic_example():
    a = gda.myopic_arb(-0.01, spec())
    assert a.quantity == pytest.approx(100.0, rel=1e-13)
    assert a.profit == pytest.approx(ARB_1PCT, rel=1e-12)
    assert gda.arb_profit(a.quantity, -0.01, spec()) == pytest.approx(a.profit, rel=1e-9)


def test_myopic_no_trade_when_overpriced():
    assert gda.myopic_arb(0.0, spec()) == gda.ArbAction(0.0, 0.0)
    assert gda.myopic_arb(0.02, spec()) == gda.ArbAction(0.0, 0.0)
    with pytest.raises(DomainError):
        gda.myopic_arb(math.nan, spec())


@pytest.mark.parametrize("z", [-1e-5, -1e-3, -0.05, -0.5])
def test_myopic_matches_grid_and_brent(z):
    s = spec(r=3.0, lam=2e-4, price=5.0)
    a = gda.myopic_arb(z, s)
    qs = np.linspace(0, 3 * a.quantity, 300_001)
    grid = max(gda.arb_profit(float(q), z, s) for q in qs[::100])
    res = minimize_scalar(lambda q: -gda.arb_profit(q, z, s), bounds=(0, 3 * a.quantity), method="bounded",
                          options={"xatol": 1e-10 * a.quantity})
    assert a.profit >= grid * (1 - 1e-12)
    assert -res.fun == pytest.approx(a.profit, rel=1e-6)
    assert res.x == pytest.approx(a.quantity, rel=1e-4)


def test_myopic_dominates_random_quantities():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        z = -rng.uniform(1e-6, 0.1)
        s = spec(r=rng.uniform(0.1, 10), lam=rng.uniform(1e-6, 1e-3), price=rng.uniform(0.5, 5))
        a = gda.myopic_arb(z, s)
        q = rng.uniform(0, 3 * a.quantity)
        assert gda.arb_profit(q, z, s) <= a.profit + 1e-10 * max(1.0, a.profit)


def test_expm1_minus_x_precision():
    z = np.array([-1e-8, -1e-4, -9.99e-4, 1e-3, -0.3])
    ref = np.array([4.9999999833333334e-17, 4.9998333374999167e-09,
                    4.9883437432545946e-07, 5.0016670834166807e-07, 0.040818220681717866])
    np.testing.assert_allclose(gda.expm1_minus_x(z), ref, rtol=1e-13)
    assert isinstance(gda.expm1_minus_x(-0.01), float)


def test_rates_identity_on_grid():
    market = MarketParams(0.0, SIGMA_5PCT)
    chain = ChainParams(DT)
    for lam in np.geomspace(1e-7, 1e-2, 1000):
        s = spec(r=2.0, lam=float(lam), price=3.0)
        rates = gda.gda_rates(s, market, chain)
        d = s.delta(market)
        assert rates.vol_rate == pytest.approx(3.0 * 2.0 * d / lam, rel=1e-15)
        lv = analytic.lvf_plus(d, SIGMA_5PCT, DT)
        assert abs(rates.arb_rate - rates.vol_rate * lv) <= 1e-12 * rates.arb_rate
        assert rates.loss_per_volume == pytest.approx(lv, rel=1e-12)


def test_rates_zero_drift():
    # powers of two so that lam + mu - sigma^2/2 is exactly zero
    lam, sigma = 2.0**-14, 2.0**-7
    market = MarketParams(0.5 * sigma**2 - lam, sigma)
    rates = gda.gda_rates(spec(lam=lam), market, ChainParams(DT))
    assert rates == gda.GdaRates(0.0, 0.0)
    assert math.isnan(rates.loss_per_volume)


def test_rates_negative_drift_rejected():
    with pytest.raises(DomainError):
        gda.gda_rates(spec(lam=1e-5), MarketParams(-1e-4, 1e-6), ChainParams(DT))


def test_rates_monte_carlo():
    market = MarketParams(0.0, SIGMA_5PCT)
    chain = ChainParams(DT)
    s = spec(r=1.0, lam=1e-4, price=2.0)
    cfg = mcsim.SimConfig(paths=500, blocks_per_chain=1000, burn_in_blocks=2000, seed=5)
    arb, vol = mcsim.simulate_gda(s, market, chain, cfg)
    rates = gda.gda_rates(s, market, chain)
    assert abs(arb.z_score(rates.arb_rate)) <= 4
    assert abs(vol.z_score(rates.vol_rate)) <= 4
