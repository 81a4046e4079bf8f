"""
Hermite functions under the cosine and sine transforms
=======================================================

Restricted to (0, inf), every Hermite function is an eigenfunction of
either the cosine or the sine transform, with eigenvalue +1 or -1.
This script samples h_0 .. h_7 on the default log grid and prints
the residual ||T h - s h|| / ||h|| for every combination.
"""

import numpy as np

from selfrecip.cstransform import eigen_residual, hermite
from selfrecip.grid import default_grid

grid = default_grid()
print(f"grid: {grid.n} nodes from {grid.t_lo:.0e} to {grid.t_hi:.0e}")

# one row per k, one column per (family, sign)
combos = [("cosine", "plus"), ("cosine", "minus"), ("sine", "plus"), ("sine", "minus")]
print("k   " + "  ".join(f"{f[:3]}{'+' if s == 'plus' else '-'}".rjust(9) for f, s in combos))
for k in range(8):
    h = hermite(k, grid)
    row = [eigen_residual(h, f, s) for f, s in combos]
    print(f"{k}   " + "  ".join(f"{r:9.1e}" for r in row))

# the small entries follow the pattern cos+, sin+, cos-, sin- with period 4;
# the O(1) entries are the other family (no eigen-relation) or the wrong sign (residual 2)
