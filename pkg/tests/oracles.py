"""Independent reference computations shared by the test modules."""

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm


def zoomed_grid_min(objective, x_range, u_range, n=500, rounds=8):
    """Brute force over an n x n grid in (x, log delta), re-gridded around the argmin.

    ``objective(x, delta)`` must broadcast. Returns the first full-box grid
    minimum and the final refined minimum.
    """
    (xl, xh), (ul, uh) = x_range, u_range
    x_lo, x_hi, u_lo, u_hi = xl, xh, ul, uh
    first = best = None
    for _ in range(rounds):
        x = np.linspace(xl, xh, n)[:, None]
        u = np.linspace(ul, uh, n)[None, :]
        vals = objective(x, np.exp(u))
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        best = float(vals[i, j])
        first = best if first is None else first
        dx, du = (xh - xl) / (n - 1), (uh - ul) / (n - 1)
        xl, xh = max(x_lo, x[i, 0] - 3 * dx), min(x_hi, x[i, 0] + 3 * dx)
        ul, uh = max(u_lo, u[0, j] - 3 * du), min(u_hi, u[0, j] + 3 * du)
    return first, best


def quad_expectation(fn, prior, delta, sigma, dt):
    """``E[fn(z0)]`` for ``z0 ~ N(mu0, sigma0^2)`` by adaptive quadrature split at the kink."""
    mu0, s0 = prior.mu0, prior.sigma0
    lo, hi = mu0 - 12 * s0, mu0 + 12 * s0

    def f(z):
        return fn(z, delta, sigma, dt) * norm.pdf(z, mu0, s0)

    total = 0.0
    for a, b in ((lo, min(hi, 0.0)), (max(lo, 0.0), hi)):
        if b > a:
            total += quad(f, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
    return total
