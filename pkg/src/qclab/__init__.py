"""Numerical laboratory for harmonic and rho-harmonic maps and their quasiconformal regularity."""

from types import ModuleType as _ModuleType

__version__ = "0.1.0"

from .conformal_plane import (MAP_CATALOG, ConformalMap, affine, derivative_bounds, identity,
                              mobius_automorphism, polynomial, square, theodorsen_map)
from .domains import DOMAIN_CATALOG, PlanarDomain, disk, ellipse, fourier_polar
from .errors import (ConfigError, ContractViolation, ConvergenceError, GridError,
                     ParameterError, QCLabError, ResolutionError, SingularityError)
from .field import (ComplexField, DiskGrid, dirichlet_energy, gradient_norm_sq, laplacian,
                    operator_norm, partial_derivatives, wirtinger_derivatives)
from .qc_diagnostics import (BeltramiField, CollarProfile, PoissonFit, beltrami,
                             bilipschitz_probe, check_component_inequality, collar_profile,
                             composition_laplacian_check, fit_poisson_constants, poisson_N,
                             to_json, verify_gradient_chain)
from .solver import (EllipticCoeffs, ReducedCoeffs, poisson_extension, reduce_elliptic,
                     solve_general_elliptic, solve_laplace_dirichlet, solve_poisson_dirichlet,
                     solve_rho_harmonic)
from .surface_chart import (SURFACE_CATALOG, ChartConstants, ConformalFactor, SurfacePatch,
                            catenoid, chart_constants, conformal_factor, conformality_residual,
                            cylinder, enneper, flat, metric_tensor, sample_patch, scaled_flat,
                            sphere_cap, weighted_energy)

__all__ = [name for name, obj in dict(globals()).items()
           if not name.startswith("_") and not isinstance(obj, _ModuleType)]
