"""
Loss and fill time against decay speed and starting price
=========================================================

An auction that decays faster fills sooner but hands more of the asset's
value to whoever fills it. This script traces both quantities as the drift
``delta`` and the starting mispricing ``z0`` vary, at 5% daily volatility and
12 second blocks.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from dutchlvf import analytic, convert_daily_vol

sigma = convert_daily_vol(0.05)
dt = 12.0

# %%
# Varying the drift
# -----------------
# With ``z0 = 0`` the loss is ``1 / (1 + zeta_minus)``. It never drops below
# the floor reached as the drift goes to zero, drawn dashed.

deltas = np.geomspace(1e-6, 1e-3, 200)
floor = analytic.lvf_lower_bound(sigma, dt)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
ax1.plot(deltas / 1e-4, analytic.lvf(0.0, deltas, sigma, dt) / 1e-4)
ax1.axhline(floor / 1e-4, ls="--", c="k")
ax1.set(xscale="log", xlabel="delta (bp/s)", ylabel="LVF (bp)")
ax2.plot(deltas / 1e-4, analytic.fill_time(0.0, deltas, sigma, dt))
ax2.axhline(dt, ls="--", c="k")
ax2.set(xscale="log", yscale="log", xlabel="delta (bp/s)", ylabel="fill time (s)")
fig.tight_layout()

print(f"loss floor: {floor / 1e-4:.3f} bp")

# %%
# Varying the start
# -----------------
# Above the fair price the loss is flat and the wait grows linearly. Below it
# the auction fills almost at once and the loss grows with the discount.

z0 = np.linspace(-50e-4, 50e-4, 401)
delta = 1e-4
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
ax1.plot(z0 / 1e-4, analytic.lvf(z0, delta, sigma, dt) / 1e-4)
ax1.set(xlabel="z0 (bp)", ylabel="LVF (bp)")
ax2.plot(z0 / 1e-4, analytic.fill_time(z0, delta, sigma, dt))
ax2.axhline(dt, ls="--", c="k")
ax2.set(xlabel="z0 (bp)", ylabel="fill time (s)")
fig.tight_layout()

# %%
# Shorter blocks
# --------------
# The floor scales like ``sigma * sqrt(dt / 2)``. Inverting it gives the
# longest block time compatible with a target loss.

for target in (4e-4, 2e-4, 1e-4):
    t = analytic.max_block_time_for_loss(target, sigma)
    print(f"loss floor {target / 1e-4:.0f} bp needs blocks of at most {t:.3f} s")

plt.show()
