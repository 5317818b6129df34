"""
The loss / wait frontier
========================

A seller who weighs a second of waiting at ``theta`` units of loss picks the
starting mispricing and drift that minimise ``LVF + theta * FT``. Sweeping
``theta`` traces the efficient frontier.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from dutchlvf import ChainParams, MarketParams, analytic, bayes, convert_daily_vol
from dutchlvf.frontier import frontier_sweep, solve_known_value, solve_unknown_value

market = MarketParams(0.0, convert_daily_vol(0.05))
chain = ChainParams(12.0)

thetas = np.geomspace(1e-8, 1e-2, 40)
points = frontier_sweep(thetas, market, chain)

# %%
# The optimal start sits a hair below the fair price throughout. Each
# point is a different auction design.

for p in points[::8]:
    print(f"theta={p.theta:.1e}  z0={p.z0 / 1e-4:+.2f} bp  delta={p.delta / 1e-4:.3f} bp/s  "
          f"LVF={p.lvf / 1e-4:.2f} bp  FT={p.fill_time:.1f} s")

fig, ax = plt.subplots(figsize=(5, 4))
ax.plot([p.fill_time for p in points], [p.lvf / 1e-4 for p in points], marker=".")
ax.axhline(analytic.lvf_lower_bound(market.sigma, chain.dt) / 1e-4, ls="--", c="k")
ax.axvline(chain.dt, ls="--", c="k")
ax.set(xscale="log", xlabel="fill time (s)", ylabel="LVF (bp)")
fig.tight_layout()

# %%
# Not knowing the fair price
# --------------------------
# With a lognormal belief about the fair price the seller picks the starting
# ask instead. Planning for the uncertainty beats plugging the point estimate
# into the known-value design.

theta = 1e-5
known = solve_known_value(theta, market, chain)
print(f"known value: z0={known.z0 / 1e-4:+.2f} bp delta={known.delta / 1e-4:.3f} bp/s")
for sigma0 in (1e-4, 5e-4, 2e-3):
    p = solve_unknown_value(theta, sigma0, 1.0, market, chain)
    prior = bayes.prior_from_value_belief(np.exp(known.z0), 1.0, sigma0)
    naive = bayes.expected_lvf(prior, known.delta, market.sigma, chain.dt) + theta * bayes.expected_fill_time(
        prior, known.delta, market.sigma, chain.dt
    )
    print(f"sigma0={sigma0:.0e}: ask0/value={p.ask0:.6f} delta={p.delta / 1e-4:.3f} bp/s "
          f"objective {p.objective:.6f} vs {naive:.6f} for the known-value design")

plt.show()
