"""
Gradual auctions: volume against loss
=====================================

A continuous gradual Dutch auction emits the asset at a constant rate and
sells each unit through its own decaying auction. The fraction of volume lost
to arbitrageurs equals the single-auction ``LVF_+`` at the same drift, so a
seller chooses the drift by trading volume against that loss.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from dutchlvf import ChainParams, GdaSpec, MarketParams, convert_daily_vol, gda
from dutchlvf.frontier import solve_gda

market = MarketParams(0.0, convert_daily_vol(0.05))
chain = ChainParams(12.0)

# %%
# One block's trade
# -----------------
# An arbitrageur buys until the marginal auction price meets the fair price.

spec = GdaSpec(emission_rate=1.0, lam=1e-4, price=1.0)
for z in (-1e-4, -1e-3, -1e-2):
    a = gda.myopic_arb(z, spec)
    print(f"z={z:+.0e}: buy {a.quantity:8.2f} units, profit {a.profit:.6f}")

# %%
# Steady-state rates
# ------------------

lams = np.geomspace(1e-6, 1e-2, 100)
rates = [gda.gda_rates(GdaSpec(1.0, float(lam), 1.0), market, chain) for lam in lams]
fig, ax = plt.subplots(figsize=(5, 4))
ax.plot(lams / 1e-4, [r.loss_per_volume / 1e-4 for r in rates])
ax.set(xscale="log", xlabel="lambda (bp/s)", ylabel="ARB / VOL (bp)")
fig.tight_layout()

# %%
# Choosing the drift
# ------------------
# The emission rate always sits at the top of its range; only the drift
# trades off.

for theta in (0.0, 1e-4, 1e-3, 1e-2):
    g = solve_gda(theta, market, chain, 1.0, (0.0, 1.0), (0.0, 1e-3))
    print(f"theta={theta:.0e}: delta={g.delta / 1e-4:.3f} bp/s LVF+={g.lvf_plus / 1e-4:.2f} bp "
          f"VOL={g.vol_rate:.4f}/s")

plt.show()
