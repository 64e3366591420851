"""
How much does single-failure coverage miss?
===========================================

For ``l`` duplicated blocks of identical units, compare the exact
reliability with the estimate that only counts states with at most one
failed unit. The gap shrinks quickly as units get better.
"""

import numpy as np

from layerdep.reliability import deviation_curve

grid = {}
for l in (2, 3, 4):
    grid[l] = np.array(deviation_curve(l, 2, 0.90, 0.999, 0.001))

p = grid[2][:, 0]
for target in (0.90, 0.95, 0.96, 0.97, 0.98, 0.99, 0.995):
    i = int(np.argmin(np.abs(p - target)))
    print(f"p={p[i]:.3f}  " + "  ".join(f"l={l}: {grid[l][i, 1]:6.3f}%" for l in grid))

# %%
# Where does each configuration drop below one percent?
for l, curve in grid.items():
    below = curve[curve[:, 1] < 1.0]
    print(f"l={l}: D < 1% from p = {below[0, 0]:.3f}")

# %%
# Plotting is optional; matplotlib is not a dependency of the library.
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    for l, curve in grid.items():
        plt.plot(curve[:, 0], curve[:, 1], label=f"l={l}, r=2")
    plt.axhline(1.0, color="grey", lw=0.5)
    plt.xlabel("unit reliability p")
    plt.ylabel("deviation (%)")
    plt.legend()
    plt.savefig("deviation_curve.png", dpi=120)
