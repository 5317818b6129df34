"""
Checking the closed forms by simulation
=======================================

The simulator draws exact block-to-block transitions: an exponential wait and
a Gaussian move of the mispricing. No time step is involved, so any gap
between simulation and formula beyond a few standard errors is a real
discrepancy.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from dutchlvf import analytic, convert_daily_vol, mcsim

sigma = convert_daily_vol(0.05)
dt, delta = 12.0, 1e-4
cfg = mcsim.SimConfig(paths=100_000, seed=1)

# %%
# Single auctions
# ---------------

for z0 in (-1e-3, -2e-4, 0.0, 1e-3):
    lv, ft = mcsim.simulate_dutch(z0, delta, sigma, dt, cfg)
    print(f"z0={z0:+.0e}  LVF {lv.mean:.6f} vs {analytic.lvf(z0, delta, sigma, dt):.6f} "
          f"(z={lv.z_score(analytic.lvf(z0, delta, sigma, dt)):+.2f})  "
          f"FT {ft.mean:.3f} vs {analytic.fill_time(z0, delta, sigma, dt):.3f}")

# %%
# The stationary mispricing
# -------------------------
# Observed just before each block, the mispricing is a two-sided exponential
# with a point of mass pushed below zero.

st = mcsim.sample_stationary(delta, sigma, dt, mcsim.SimConfig(paths=500, blocks_per_chain=1000, seed=2))
sd = analytic.stationary_distribution(delta, sigma, dt)
z = np.linspace(st.hist_edges[0], st.hist_edges[-1], 400)
widths = np.diff(st.hist_edges)
fig, ax = plt.subplots(figsize=(5, 4))
ax.bar(st.hist_edges[:-1] / 1e-4, st.hist_counts / (st.samples.size * widths), width=widths / 1e-4,
       align="edge", alpha=0.5)
ax.plot(z / 1e-4, sd.pdf(z), c="k")
ax.set(yscale="log", xlabel="z (bp)", ylabel="density")
fig.tight_layout()
print(f"P(z<0): {st.pi_minus.mean:.4f} +- {st.pi_minus.std_error:.4f} vs {sd.pi_minus:.4f}")

plt.show()
