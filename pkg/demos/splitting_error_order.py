"""Isolate the splitting error from the discretisation error.

Comparing a split run against the exact solution mixes three error
sources: space, time, and the splitting itself.  Running the unsplit
trapezoidal scheme on the same grid with the same step and measuring
max_n ||W^n - U^n|| leaves only the third.  On a fixed grid that gap
shrinks like tau^2 for the plain factored scheme and like tau^3 for
the corrected one, which is the whole case for the correction: one
extra order in the step for two extra matrix products per step.
"""

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from splitpar import Grid, StepperConfig, error_norm, make_problem, run

problem = make_problem("a1")
grid = Grid(64)
taus = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]

gaps = {"dg_adi": [], "dk_adi": []}
for tau in taus:
    base = run(problem, grid, StepperConfig(method="cn", tau=tau, store_states=True))
    for method in gaps:
        split = run(
            problem, grid, StepperConfig(method=method, tau=tau, store_states=True)
        )
        diffs = [w - u for w, u in zip(split.states[1:], base.states[1:])]
        gaps[method].append(error_norm(diffs, grid.h))

fig, ax = plt.subplots(figsize=(5.0, 3.8))
for method, vals in gaps.items():
    orders = np.log2(np.array(vals[:-1]) / np.array(vals[1:]))
    print(f"{method}: gaps " + ", ".join(f"{v:.3e}" for v in vals))
    print(f"{method}: observed orders " + ", ".join(f"{o:.2f}" for o in orders))
    ax.loglog(taus, vals, "o-", label=method)
for p in (2, 3):
    guide = [gaps["dg_adi" if p == 2 else "dk_adi"][0] * (t / taus[0]) ** p for t in taus]
    ax.loglog(taus, guide, "k:", lw=0.8)
    ax.annotate(f"slope {p}", (taus[-1], guide[-1]), fontsize=8)
ax.set_xlabel("tau")
ax.set_ylabel("max_n ||split - unsplit||")
ax.legend()
fig.tight_layout()
fig.savefig("splitting_error_order.png", dpi=150)
print("wrote splitting_error_order.png")
