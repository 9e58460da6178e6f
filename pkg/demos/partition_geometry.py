"""The strip geometry behind the subdomain splitting, drawn.

Top panel: the weight functions rho_k for two strips per subdomain and
a quarter-width overlap.  Each subdomain is a union of vertical
strips; the weights ramp across the overlaps, sum to one everywhere,
and are exactly 0 or 1 outside them.

Bottom panel: where the splitting error lives.  Applying the
splitting-error operator to every coordinate basis vector of a grid
and recording the result's magnitude column by column shows it
vanishing identically wherever one weight is 1 in a neighbourhood,
i.e. away from the overlaps.  The correction therefore only has to act
near the strip boundaries.
"""

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from splitpar import (
    Grid,
    bh_apply,
    build_dd_split,
    make_coefficient,
    make_partition_of_unity,
    make_strip_decomposition,
)

d = make_strip_decomposition(2, "1/16")
pou = make_partition_of_unity(d)
x = np.linspace(0.0, 1.0, 2001)
rho = pou.rho_all(x)

grid = Grid(32)
split = build_dd_split(grid, make_coefficient("a2"), d)
column_peak = np.zeros(grid.M - 1)
for i in range(1, grid.M):
    e = np.zeros(grid.n_interior)
    e[grid.index(i, grid.M // 2)] = 1.0
    column_peak[i - 1] = np.abs(bh_apply(split, 0.5, grid.h, e)).max()

fig, (top, bottom) = plt.subplots(
    2, 1, figsize=(7.0, 5.0), sharex=True, height_ratios=[2, 1]
)
for k, r in enumerate(rho):
    top.plot(x, r, label=f"rho_{k}")
top.plot(x, rho[0] + rho[1], "k:", lw=0.8, label="sum")
for k, strips in enumerate(d.strips):
    for lo, hi in strips:
        top.axvspan(float(lo), float(hi), ymin=0.02 * (k + 1), ymax=0.06 * (k + 1),
                    color=f"C{k}", alpha=0.6)
top.set_ylabel("weight")
top.legend(loc="center right", fontsize=8)

nodes = np.arange(1, grid.M) * grid.h
bottom.semilogy(nodes, np.where(column_peak > 0.0, column_peak, np.nan), "o", ms=3)
zero = column_peak == 0.0
bottom.plot(nodes[zero], np.full(zero.sum(), 1e-18), "x", color="C3", ms=4,
            label="exactly zero")
bottom.set_xlabel("x")
bottom.set_ylabel("peak of error action")
bottom.legend(fontsize=8)
fig.tight_layout()
fig.savefig("partition_geometry.png", dpi=150)
print(f"columns with identically vanishing action: {int(zero.sum())} of {grid.M - 1}")
print("wrote partition_geometry.png")
