"""
The Mellin side of the cosine and sine transforms
==================================================

On the critical line the Mellin transform turns both transforms into a
unimodular multiplier combined with the reflection tau -> -tau.  The
script checks this for a few functions and shows that the multiplier is
the square of the phase factor used to build the eigenchains.
"""

import numpy as np

from selfrecip.grid import default_grid, l2_norm
from selfrecip.mellin import (mellin_forward, mellin_inverse, titchmarsh_multiplier,
                              verify_multiplier_relation)
from selfrecip.special import gamma, phase_values

grid = default_grid()

# exp(-t) has the Gamma function as its Mellin transform
x = grid.sample(lambda t: np.exp(-t))
phi = mellin_forward(x)
sel = np.abs(phi.tau) <= 20
print("max |Phi - Gamma(1/2 + i tau)|, |tau| <= 20:",
      f"{np.abs(phi.values[sel] - gamma(0.5 + 1j * phi.tau[sel])).max():.1e}")

# forward and inverse are exact discrete inverses
back = mellin_inverse(phi, grid)
print(f"round trip, relative L2 error: {l2_norm(back - x) / l2_norm(x):.1e}")

# the multiplier relation, measured over the central half of the tau grid
tests = {"exp(-t^2/2)": lambda t: np.exp(-t * t / 2),
         "exp(-t)": lambda t: np.exp(-t),
         "t exp(-t^2/2)": lambda t: t * np.exp(-t * t / 2)}
for label, f in tests.items():
    gaps = [verify_multiplier_relation(grid.sample(f), fam) for fam in ("cosine", "sine")]
    print(f"{label:>14}: cosine {gaps[0]:.1e}, sine {gaps[1]:.1e}")

tau = np.linspace(-30, 30, 7)
for fam in ("cosine", "sine"):
    m = titchmarsh_multiplier(fam, 0.5 + 1j * tau)
    print(f"{fam}: |M| - 1 = {np.abs(np.abs(m) - 1).max():.1e},",
          f"M - phase^2 = {np.abs(m - phase_values(fam, tau) ** 2).max():.1e}")
