"""Exponential-kernel fractional derivatives of simple test functions.

Sweeps the order alpha for f(t) = t and f(t) = t^2 and compares the
sampled operator against the closed form available for f(t) = t.

Run from the repository root:
    python demos/demo_cf_derivative.py
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import fracdim as fd

grid = fd.UniformGrid.from_range(5.0, 2001)
t = grid.times
alphas = [0.25, 0.5, 0.75, 0.95, 1.0]

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))

f = fd.from_callable(lambda t: t, grid)
for alpha in alphas:
    g = fd.cf_derivative(f, alpha)
    ax1.plot(t, g.values, label=rf"$\alpha={alpha}$")
    if alpha < 1.0:
        lam = alpha / (1.0 - alpha)
        closed = (1.0 / alpha) * -np.expm1(-lam * t)
        err = np.max(np.abs(g.values - closed))
        print(f"f(t)=t,   alpha={alpha}: max |sampled - closed form| = {err:.2e}")
ax1.set_xlabel("t")
ax1.set_ylabel("derivative of t")
ax1.set_title("operator interpolates between t - 0 and 1")
ax1.legend()

f2 = fd.from_callable(lambda t: t**2, grid)
for alpha in alphas:
    g2 = fd.cf_derivative(f2, alpha)
    ax2.plot(t, g2.values, label=rf"$\alpha={alpha}$")
ax2.plot(t, 2 * t, "k--", lw=0.8, label="2t")
ax2.set_xlabel("t")
ax2.set_ylabel("derivative of t^2")
ax2.legend()

fig.tight_layout()
fig.savefig("cf_derivative_sweep.png", dpi=150)
print("saved cf_derivative_sweep.png")
