"""
Lipschitz or not: reading the boundary collars
==============================================

A map is Lipschitz up to the boundary when its gradient stays bounded in
thinner and thinner collars.  Compare smooth boundary data with the Holder
data |theta|^(1/2), whose extension has a gradient blowing up like
dist^(-1/2).
"""

import numpy as np

from qclab import DiskGrid, collar_profile, poisson_extension, solve_laplace_dirichlet

grid = DiskGrid(n=129)
smooth = poisson_extension(lambda t: np.exp(1j * (t + 0.3 * np.sin(t))), grid)
rough = solve_laplace_dirichlet(grid, lambda t: np.sqrt(np.abs(np.angle(np.exp(1j * t)))))

for label, field in (("smooth", smooth), ("|theta|^1/2", rough)):
    prof = collar_profile(field)
    print(f"{label}: verdict {prof.verdict}, exponent {prof.exponent:.2f}")
    for delta, sup, count in prof.collars:
        print(f"   delta = {delta:.4f}  sup|Df| = {sup:8.3f}  ({count} nodes)")
