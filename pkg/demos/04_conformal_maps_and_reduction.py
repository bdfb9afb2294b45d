"""
Conformal maps onto smooth domains, and elliptic reduction
==========================================================

Map the unit disk conformally onto a star-shaped domain with Theodorsen's
method and check that the derivative stays away from zero up to the
boundary.  Then reduce a constant-coefficient elliptic operator to the
Laplacian by a linear change of variables.
"""

import numpy as np

from qclab import (DiskGrid, EllipticCoeffs, derivative_bounds, fourier_polar, reduce_elliptic,
                   theodorsen_map)

domain = fourier_polar([1.0, 0.0, 0.0, 0.2, 0.0])   # r(theta) = 1 + 0.2 cos(2 theta)
omega = theodorsen_map(domain, n_modes=256)
print(f"Theodorsen: {omega.info['sweeps']} sweeps, residual {omega.info['residual']:.1e}")

phi = np.linspace(0, 2 * np.pi, 400, endpoint=False)
gap = np.max(np.abs(omega(np.exp(1j * phi)) - domain.point(omega.boundary_correspondence(phi))))
print(f"image of the circle lies on the boundary curve to {gap:.1e}")

bounds = derivative_bounds(omega, DiskGrid(n=65))
print(f"{bounds.inf_abs:.4f} <= |omega'| <= {bounds.sup_abs:.4f}")

# 2 w_xx + w_xy + w_yy + ... : the square root P of the principal matrix
# turns it into the Laplacian in the variables (u, v) = P^-1 (x, y).
red = reduce_elliptic(EllipticCoeffs(alpha=2.0, beta=0.5, gamma=1.0, a1=0.3, a=1.0, d=-1.0))
print("substitution matrix:\n", np.round(red.substitution, 6))
print(f"Poisson constants of the reduced equation: M = {red.M:.4f}, N = {red.N:.4f}")
