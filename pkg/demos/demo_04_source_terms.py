"""
Problems with a running cost
============================

With ``f = 1`` the paraboloid ``(1 - x^2 - y^2) / 2`` solves the problem on
the square for every p >= 2.  On the rectangle (-2,2) x (-1,1) with zero
boundary data the solution is known only on the strip |x| < 1, and the error
is read at the centre, where the exact value is 0.5.
"""

import numpy as np

from gameplap import bench
from gameplap.grid import bilinear, build_grid

for p in (5.0, np.inf):
    named = bench.radial_problem(p)
    row = bench.run_table(named, [bench.radial_config(41 if p == np.inf else 21, 4, 24)]).rows[0]
    print(f"radial p={p}: L-inf error {row.error:.4f} after {row.iterations} iterations")

# %%
# Tug-of-war on a coarse rectangle; multi-level circles reach further into
# the interior and need fewer sweeps.
tug = bench.tugofwar_problem()
for levels in (4, 2):
    cfg = bench.tugofwar_config(81, 41, levels)
    row = bench.run_table(tug, [cfg], keep_fields=True).rows[0]
    grid = build_grid(tug.problem.bounds, 81, 41)
    print(f"levels={levels}: u(0,0) = {bilinear(row.field, grid, (0, 0)):.4f}, "
          f"{row.iterations} iterations")
