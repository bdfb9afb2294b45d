"""Dirichlet solvers: Laplace, rho-harmonic maps and reduced quasilinear elliptic PDE.

All solvers discretize with the Shortley-Weller Laplacian of
:func:`qclab.field.laplacian`, so the returned field, pushed back through that
operator, reproduces the solver's own equation.  Boundary data are callables
of the curve parameter ``t`` of the grid's domain (the polar angle for the
unit disk).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg import sqrtm
from scipy.sparse.linalg import splu

from .domains import PlanarDomain
from .errors import ContractViolation, ConvergenceError, GridError, ParameterError
from .field import (EAST, NORTH, SOUTH, WEST, ComplexField, DiskGrid, laplacian,
                    laplacian_weights, partial_derivatives, wirtinger_derivatives)

J01 = 2.404825557695773  # first zero of the Bessel function J0


# ----------------------------------------------------------------------
# linear Dirichlet problem
# ----------------------------------------------------------------------
class _LaplaceSystem:
    """Interior unknowns, stencil weights and (lazily) a sparse LU factorization.

    Stencil sums are evaluated in difference form ``sum_d w_d (u_d - u_c)``,
    which keeps rounding at the level of the data rather than ``eps / h**2``.
    """

    def __init__(self, grid: DiskGrid):
        self.grid = grid
        st = grid.stencil
        I = st["index"]
        N = grid.n * grid.n
        self.m = I.size
        pos = np.full(N, -1, dtype=np.int64)
        pos[I] = np.arange(self.m)
        self.diag, self.w = laplacian_weights(grid)
        near = st["near"]
        # index into concat(u, trace)
        self.nb = np.where(near < N, pos[np.minimum(near, N - 1)], self.m + near - N)
        self.is_link = near >= N
        self.scale = (4.0 / grid.h**2) / np.abs(self.diag)
        rc = (I // grid.n + I % grid.n) % 2
        self.colors = [np.flatnonzero(rc == 0), np.flatnonzero(rc == 1)]
        self._lu = None

    def apply(self, u, trace, idx=None):
        """Discrete Laplacian of interior values ``u`` with boundary ``trace``."""
        ext = np.concatenate([u, trace.astype(u.dtype, copy=False)])
        sh = (-1,) + (1,) * (u.ndim - 1)
        if idx is None:
            idx = slice(None)
        uc = u[idx]
        out = np.zeros_like(uc)
        for d in (EAST, WEST, NORTH, SOUTH):
            out = out + self.w[d][idx].reshape(sh) * (ext[self.nb[d][idx]] - uc)
        return out

    def residual(self, u, trace, source):
        """Raw and row-scaled max-norm residual of ``Laplacian u = source``.

        Row scaling divides each row by its diagonal relative to the regular
        five-point diagonal ``4 / h**2``; it only differs from the raw
        residual on rows with a short Shortley-Weller arm.
        """
        r = np.abs(source - self.apply(u, trace))
        if r.ndim > 1:
            r = r.reshape(r.shape[0], -1).max(axis=1)
        return float(r.max()), float((r * self.scale).max())

    def link_rhs(self, trace):
        """Boundary contribution moved to the right-hand side of the matrix form."""
        tail = trace.shape[1:]
        out = np.zeros((self.m,) + tail, dtype=np.result_type(trace, float))
        sh = (-1,) + (1,) * len(tail)
        for d in (EAST, WEST, NORTH, SOUTH):
            sel = self.is_link[d]
            out[sel] -= self.w[d][sel].reshape(sh) * trace[self.nb[d][sel] - self.m]
        return out

    @property
    def matrix(self):
        rows, cols, vals = [np.arange(self.m)], [np.arange(self.m)], [self.diag]
        for d in (EAST, WEST, NORTH, SOUTH):
            sel = ~self.is_link[d]
            rows.append(np.flatnonzero(sel))
            cols.append(self.nb[d][sel])
            vals.append(self.w[d][sel])
        return sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(self.m, self.m))

    def _lu_solve(self, rhs):
        if self._lu is None:
            self._lu = splu(self.matrix)
        if rhs.ndim == 1:
            if np.iscomplexobj(rhs):
                return self._lu.solve(rhs.real.copy()) + 1j * self._lu.solve(rhs.imag.copy())
            return self._lu.solve(np.ascontiguousarray(rhs, dtype=float))
        cols = rhs.reshape(rhs.shape[0], -1)
        out = np.column_stack([self._lu_solve(cols[:, k]) for k in range(cols.shape[1])])
        return out.reshape(rhs.shape)

    def direct(self, source, trace):
        """Sparse LU solve followed by one step of iterative refinement."""
        rhs = source + self.link_rhs(trace)
        u = self._lu_solve(rhs)
        r = source - self.apply(u, trace)
        return u + self._lu_solve(r)

    def omega(self):
        area = float(self.grid.weights.sum())
        lam = np.pi * J01**2 / area
        rho_j = max(0.0, 1.0 - lam * self.grid.h**2 / 4.0)
        return 2.0 / (1.0 + np.sqrt(1.0 - rho_j**2))

    def sor(self, source, trace, u0, tol, max_sweeps, omega=None):
        """Red-black SOR in correction form; stops on the row-scaled residual."""
        om = self.omega() if omega is None else omega
        u = u0.astype(np.result_type(u0, source, trace, float)).copy()
        sh = (-1,) + (1,) * (u.ndim - 1)
        wsum = -self.diag
        history = []
        for sweep in range(1, max_sweeps + 1):
            for idx in self.colors:
                corr = (self.apply(u, trace, idx) - source[idx]) / wsum[idx].reshape(sh)
                u[idx] = u[idx] + om * corr
            if sweep % 10 == 0 or sweep == max_sweeps:
                raw, scaled = self.residual(u, trace, source)
                history.append(scaled)
                if not np.isfinite(scaled):
                    raise ConvergenceError("SOR diverged", history)
                if scaled <= tol:
                    return u, sweep, raw, scaled, history
        raise ConvergenceError(f"SOR did not reach {tol:g} in {max_sweeps} sweeps "
                               f"(residual {history[-1]:.3e})", history)


def _system(grid):
    sys_ = grid.__dict__.get("_laplace_system")
    if sys_ is None:
        sys_ = _LaplaceSystem(grid)
        grid.__dict__["_laplace_system"] = sys_
    return sys_


def _as_boundary(boundary):
    if callable(boundary):
        return boundary
    value = complex(boundary) if np.iscomplexobj(boundary) else float(boundary)
    return lambda t: np.full(np.shape(t), value, dtype=type(np.asarray(value).item()))


def _interior_rhs(grid, source):
    if source is None:
        return 0.0
    if callable(source):
        return np.asarray(source(grid.z[grid.interior]))
    return np.asarray(source)


def solve_poisson_dirichlet(grid: DiskGrid, boundary, source=None, tol=1e-10,
                            method="sor", max_sweeps=100_000, initial=None):
    """Solve ``Laplacian u = source`` with Dirichlet data on ``grid``.

    Parameters
    ----------
    boundary : callable or scalar
        Values as a function of the curve parameter.
    source : callable, array or None
        Right-hand side at interior nodes (callable of the node position or
        an array ordered like ``grid.interior_index``).
    method : {"sor", "direct"}
        Red-black SOR to a row-scaled residual ``tol``, or a sparse LU solve.
    """
    bfun = _as_boundary(boundary)
    sys_ = _system(grid)
    trace = np.asarray(bfun(grid.link_t))
    src = _interior_rhs(grid, source)
    src = np.broadcast_to(np.asarray(src, dtype=np.result_type(src, trace, float)),
                          (sys_.m,) + trace.shape[1:]).copy()
    if method == "direct":
        u = sys_.direct(src, trace)
        raw, scaled = sys_.residual(u, trace, src)
        info = {"method": "direct", "iterations": 1, "residual": scaled, "raw_residual": raw,
                "history": [scaled]}
    elif method == "sor":
        if initial is None:
            u0 = np.broadcast_to(np.mean(trace, axis=0), src.shape).astype(src.dtype)
        else:
            u0 = np.asarray(initial)
        u, sweeps, raw, scaled, hist = sys_.sor(src, trace, u0, tol, max_sweeps)
        info = {"method": "sor", "iterations": sweeps, "residual": scaled, "raw_residual": raw,
                "history": hist, "omega": sys_.omega()}
    else:
        raise ParameterError(f"unknown linear method {method!r}")
    f = ComplexField.from_boundary(grid, u, bfun)
    object.__setattr__(f, "info", info)
    return f


def solve_laplace_dirichlet(grid: DiskGrid, boundary, tol=1e-10, method="sor",
                            max_sweeps=100_000):
    """Discrete harmonic extension of ``boundary`` into the grid's domain.

    The default red-black SOR iterates to a row-scaled residual below
    ``tol``; the limit satisfies the discrete maximum principle.
    """
    return solve_poisson_dirichlet(grid, boundary, None, tol=tol, method=method,
                                   max_sweeps=max_sweeps)


# ----------------------------------------------------------------------
# Poisson extension on the disk
# ----------------------------------------------------------------------
class PoissonExtension:
    """Harmonic extension of boundary data on a disk, evaluable anywhere inside.

    The data are sampled at ``m`` equispaced angles; the Poisson integral of
    their trigonometric interpolant is summed as
    ``sum_k c_k r^|k| e^{ik phi}`` (the Fourier expansion of the Poisson
    kernel), which stays accurate up to the circle.
    """

    def __init__(self, boundary_fn, m, center=0j, radius=1.0):
        self.m = int(m)
        self.center = complex(center)
        self.radius = float(radius)
        theta = 2 * np.pi * np.arange(self.m) / self.m
        vals = np.asarray(boundary_fn(theta))
        self.tail = vals.shape[1:]
        c = np.fft.fft(vals, axis=0) / self.m
        K = self.m // 2
        self.pos = c[:K + 1].copy()            # k = 0..K
        self.neg = c[::-1][:K].copy()          # k = 1..K  (c_{-k})
        if self.m % 2 == 0:
            self.pos[K] *= 0.5
            self.neg[K - 1] = self.pos[K]
        self.real_data = not np.iscomplexobj(vals)

    def __call__(self, z):
        w = (np.asarray(z, dtype=complex) - self.center) / self.radius
        sh = w.shape + (1,) * len(self.tail)
        wv = w.reshape(sh)
        acc_p = np.zeros(w.shape + self.tail, dtype=complex)
        for k in range(self.pos.shape[0] - 1, -1, -1):
            acc_p = acc_p * wv + self.pos[k]
        acc_n = np.zeros(w.shape + self.tail, dtype=complex)
        wb = np.conj(wv)
        for k in range(self.neg.shape[0] - 1, -1, -1):
            acc_n = acc_n * wb + self.neg[k]
        out = acc_p + acc_n * wb
        return out.real if self.real_data else out


def poisson_extension(boundary_fn, grid: DiskGrid, n_samples=None):
    """Harmonic extension of ``boundary_fn(theta)`` into a disk grid.

    ``n_samples`` defaults to ``4 * grid.n``; fewer triggers a warning.
    The returned field carries the extension as its evaluator ``func``.
    """
    dom = grid.domain
    if dom.radius is None or dom.params.get("radius") is None:
        raise GridError("poisson_extension needs a disk grid")
    m = 4 * grid.n if n_samples is None else int(n_samples)
    if m < 4 * grid.n:
        warnings.warn(f"boundary sampled at {m} < 4n = {4 * grid.n} points; "
                      "extension may be inaccurate", RuntimeWarning, stacklevel=2)
    ext = PoissonExtension(boundary_fn, m, center=dom.center, radius=dom.params["radius"])
    zi = grid.z[grid.interior]
    vi = ext(zi)
    f = ComplexField.from_boundary(grid, vi, boundary_fn)
    object.__setattr__(f, "func", ext)
    return f


# ----------------------------------------------------------------------
# nonlinear problems
# ----------------------------------------------------------------------
def _picard(grid, boundary, rhs_of, tol, relaxation, max_outer, check=None, initial=None):
    """Damped Picard iteration for ``Laplacian g = rhs_of(g)``.

    ``rhs_of`` maps the current :class:`ComplexField` to interior values.
    The relaxation is halved whenever the residual increases.
    """
    if not 0 < relaxation <= 1:
        raise ParameterError("relaxation must lie in (0, 1]")
    bfun = _as_boundary(boundary)
    sys_ = _system(grid)
    trace = np.asarray(bfun(grid.link_t))
    g = initial if initial is not None else solve_poisson_dirichlet(grid, bfun, method="direct")
    lam = relaxation
    history, raw_hist = [], []
    prev = np.inf
    for it in range(max_outer + 1):
        if check is not None:
            check(g)
        rhs = np.asarray(rhs_of(g))
        u = g.values[grid.interior]
        raw, scaled = sys_.residual(u, trace, rhs)
        history.append(raw)
        if not np.isfinite(raw):
            raise ConvergenceError("Picard iteration produced non-finite values", history)
        if raw <= tol:
            f = ComplexField.from_boundary(grid, u, bfun)
            object.__setattr__(f, "info", {
                "method": "picard", "iterations": it, "residual": raw,
                "scaled_residual": scaled, "relaxation": lam, "history": history})
            return f
        if raw > prev:
            lam = max(lam / 2, 1.0 / 1024)
        prev = raw
        target = sys_.direct(rhs, trace)
        g = ComplexField.from_boundary(grid, (1 - lam) * u + lam * target, bfun)
    raise ConvergenceError(f"Picard iteration did not reach {tol:g} in {max_outer} "
                           f"iterations (residual {history[-1]:.3e})", history)


def rho_harmonic_rhs(rho, g: ComplexField):
    """``-4 (log rho)_w(g) g_z g_zbar`` at interior nodes."""
    gz, gzb = wirtinger_derivatives(g)
    I = g.grid.interior
    return -4.0 * rho.log_rho_w(g.values[I]) * gz.values[I] * gzb.values[I]


def rho_harmonic_residual(rho, g: ComplexField):
    """Max-norm residual of ``Laplacian g + 4 (log rho)_w(g) g_z g_zbar = 0``."""
    lap = laplacian(g).values[g.grid.interior]
    return float(np.max(np.abs(lap - rho_harmonic_rhs(rho, g))))


def rho_harmonic_residual_pointwise(rho, g, g_x, g_y, g_xx, g_yy, points):
    """Residual of ``g_{z zbar} + (log rho)_w(g) g_z g_zbar`` from exact derivatives.

    The derivative callables take complex points; this form does not assume
    holomorphy and is used to certify closed-form maps.
    """
    p = np.asarray(points)
    gx, gy = g_x(p), g_y(p)
    gz, gzb = 0.5 * (gx - 1j * gy), 0.5 * (gx + 1j * gy)
    gzzb = 0.25 * (g_xx(p) + g_yy(p))
    return float(np.max(np.abs(gzzb + rho.log_rho_w(g(p)) * gz * gzb)))


def solve_rho_harmonic(rho, boundary, grid: DiskGrid, tol=1e-8, relaxation=0.5,
                       max_outer=500):
    """Solve the rho-harmonic Dirichlet problem by damped Picard iteration.

    Each step solves ``Laplacian g_new = -4 (log rho)_w(g) g_z g_zbar`` with
    the boundary data and blends ``g <- (1 - lam) g + lam g_new``.  The
    conformal factor is composed in closed form, never interpolated.

    Raises
    ------
    ConvergenceError
        On divergence, or when an iterate leaves the domain of ``rho``.
    """
    radius = getattr(rho, "radius", np.inf)

    def check(g):
        vals = g.values[grid.interior]
        if np.any(np.abs(vals) > radius * (1 + 1e-9)):
            raise ConvergenceError("iterate left the domain of the conformal factor",
                                   [float(np.max(np.abs(vals)))])

    return _picard(grid, boundary, lambda g: rho_harmonic_rhs(rho, g), tol, relaxation,
                   max_outer, check=check)


# ----------------------------------------------------------------------
# quasilinear elliptic equations with constant principal part
# ----------------------------------------------------------------------
def _coef(c):
    if callable(c):
        return c
    value = c
    return lambda z, w=None: np.full(np.shape(z), value, dtype=np.result_type(value, float))


@dataclass
class EllipticCoeffs:
    """``alpha w_xx + 2 beta w_xy + gamma w_yy + a1 w_x^2 + b1 w_x w_y + c1 w_y^2
    + a w_x + b w_y + c w + d = 0``.

    Lower-order coefficients are numbers or callables ``f(z, w)`` of the
    position and (optionally) the current solution values.
    """

    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 1.0
    a1: object = 0.0
    b1: object = 0.0
    c1: object = 0.0
    a: object = 0.0
    b: object = 0.0
    c: object = 0.0
    d: object = 0.0

    def __post_init__(self):
        if not self.alpha > 0 or not self.alpha * self.gamma - self.beta**2 > 0:
            raise ParameterError("equation is not elliptic: need alpha > 0 and "
                                 "alpha*gamma - beta^2 > 0")

    @property
    def principal(self):
        return np.array([[self.alpha, self.beta], [self.beta, self.gamma]], dtype=float)


@dataclass
class ReducedCoeffs:
    """Coefficients after the linear change of variables that removes the principal part.

    ``coords`` is the coordinate matrix ``(alpha1, beta1; beta1, gamma1)``
    with ``(x, y) = coords @ (u, v)``, the SPD square root of the principal
    matrix.  ``substitution`` is its inverse, mapping ``(x, y)`` to
    ``(u, v)``: the SPD square root of the inverse principal matrix.
    """

    substitution: np.ndarray
    coords: np.ndarray
    a1: Callable
    b1: Callable
    c1: Callable
    a: Callable
    b: Callable
    c: Callable
    d: Callable
    M: float = np.nan
    N: float = np.nan
    sup: dict = field(default_factory=dict)

    def to_reduced(self, z):
        z = np.asarray(z, dtype=complex)
        q = self.substitution
        return (q[0, 0] * z.real + q[0, 1] * z.imag) + 1j * (q[1, 0] * z.real + q[1, 1] * z.imag)

    def from_reduced(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        p = self.coords
        return (p[0, 0] * zeta.real + p[0, 1] * zeta.imag) + 1j * (p[1, 0] * zeta.real + p[1, 1] * zeta.imag)

    def lower_order(self, zeta, w, w_u, w_v):
        """Sum of every non-principal term of the reduced equation."""
        return (self.a1(zeta, w) * w_u**2 + self.b1(zeta, w) * w_u * w_v + self.c1(zeta, w) * w_v**2
                + self.a(zeta, w) * w_u + self.b(zeta, w) * w_v + self.c(zeta, w) * w + self.d(zeta, w))


def poisson_constants(a1, b1, c1, a, b, c, d, w_sup=0.0):
    """``M`` and ``N`` of the Poisson differential inequality from coefficient sup-norms.

    ``M = (|a|+|b|)/2 + max(|a1|, |c1|) + |b1|/2`` and
    ``N = (|a|+|b|)/2 + |c| sup|w| + |d|``.
    """
    M = (a + b) / 2 + max(a1, c1) + b1 / 2
    N = (a + b) / 2 + c * w_sup + d
    return float(M), float(N)


def reduce_elliptic(ec: EllipticCoeffs, points=None, w_values=None, w_sup=None):
    """Change variables so that the principal part becomes the Laplacian.

    Parameters
    ----------
    points : array of complex, optional
        Sample of the closed original domain used for the coefficient
        sup-norms in ``M`` and ``N``; defaults to a polar sample of the unit
        disk.
    w_values : array, optional
        Solution values at ``points`` for coefficients depending on ``w``.
    w_sup : float, optional
        Bound on ``|w|`` entering ``N``; defaults to ``max |w_values|`` or 0.
    """
    A = ec.principal
    if not (A[0, 0] > 0 and np.linalg.det(A) > 0):
        raise ParameterError("principal part is not elliptic")
    P = np.real(sqrtm(A))
    P = 0.5 * (P + P.T)
    q = np.linalg.inv(P)
    q = 0.5 * (q + q.T)
    q11, q12, q21, q22 = q[0, 0], q[0, 1], q[1, 0], q[1, 1]
    A1, B1, C1 = _coef(ec.a1), _coef(ec.b1), _coef(ec.c1)
    Aa, Bb, Cc, Dd = _coef(ec.a), _coef(ec.b), _coef(ec.c), _coef(ec.d)

    def back(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return (P[0, 0] * zeta.real + P[0, 1] * zeta.imag) + 1j * (P[1, 0] * zeta.real + P[1, 1] * zeta.imag)

    red = ReducedCoeffs(
        substitution=q, coords=P,
        a1=lambda s, w=None: A1(back(s), w) * q11**2 + B1(back(s), w) * q11 * q21 + C1(back(s), w) * q21**2,
        b1=lambda s, w=None: (2 * A1(back(s), w) * q11 * q12 + B1(back(s), w) * (q11 * q22 + q12 * q21)
                              + 2 * C1(back(s), w) * q21 * q22),
        c1=lambda s, w=None: A1(back(s), w) * q12**2 + B1(back(s), w) * q12 * q22 + C1(back(s), w) * q22**2,
        a=lambda s, w=None: Aa(back(s), w) * q11 + Bb(back(s), w) * q21,
        b=lambda s, w=None: Aa(back(s), w) * q12 + Bb(back(s), w) * q22,
        c=lambda s, w=None: Cc(back(s), w),
        d=lambda s, w=None: Dd(back(s), w),
    )
    if points is None:
        r, t = np.meshgrid(np.linspace(0, 1, 41), np.linspace(0, 2 * np.pi, 96, endpoint=False))
        points = (r * np.exp(1j * t)).ravel()
    zeta = red.to_reduced(points)
    sup = {name: float(np.max(np.abs(getattr(red, name)(zeta, w_values))))
           for name in ("a1", "b1", "c1", "a", "b", "c", "d")}
    if w_sup is None:
        w_sup = float(np.max(np.abs(w_values))) if w_values is not None else 0.0
    red.M, red.N = poisson_constants(sup["a1"], sup["b1"], sup["c1"], sup["a"], sup["b"],
                                     sup["c"], sup["d"], w_sup)
    red.sup = dict(sup, w=w_sup)
    return red


def _transform_domain(domain: PlanarDomain, q):
    def lin(w):
        w = np.asarray(w, dtype=complex)
        return (q[0, 0] * w.real + q[0, 1] * w.imag) + 1j * (q[1, 0] * w.real + q[1, 1] * w.imag)

    return PlanarDomain(name=domain.name + "'", point=lambda t: lin(domain.point(t)),
                        tangent=lambda t: lin(domain.tangent(t)),
                        second=lambda t: lin(domain.second(t)),
                        smoothness=domain.smoothness, center=complex(lin(domain.center)),
                        params=dict(domain.params, substitution=q.tolist()))


def solve_general_elliptic(ec: EllipticCoeffs, boundary, grid: DiskGrid, tol=1e-8,
                           relaxation=0.5, max_outer=500):
    """Solve the quasilinear Dirichlet problem after principal-part reduction.

    The problem is posed on the transformed domain ``substitution(Omega)``
    (the given grid is reused when the principal part is already the
    identity).  Damped Picard iteration treats every lower-order term as
    right-hand side: ``Laplacian_uv w_new = -lower_order(w)``.  The boundary
    data keep their curve parameter.  The result lives on the reduced grid;
    ``info["reduced"]`` holds the :class:`ReducedCoeffs`.
    """
    red = reduce_elliptic(ec, points=grid.sample_points)
    if np.allclose(red.substitution, np.eye(2), atol=1e-14):
        rgrid = grid
    else:
        rgrid = DiskGrid(_transform_domain(grid.domain, red.substitution), grid.n)
    zeta = rgrid.z[rgrid.interior]

    def rhs_of(w):
        wu, wv = partial_derivatives(w)
        I = rgrid.interior
        return -red.lower_order(zeta, w.values[I], wu.values[I], wv.values[I])

    sol = _picard(rgrid, boundary, rhs_of, tol, relaxation, max_outer)
    vals = sol.values[rgrid.interior]
    pts = np.concatenate([zeta, rgrid.link_z])
    wv = np.concatenate([vals, sol.trace])
    red_final = reduce_elliptic(ec, points=red.from_reduced(pts), w_values=wv)
    sol.info["reduced"] = red_final
    return sol


def general_elliptic_residual(red: ReducedCoeffs, w: ComplexField):
    """Max-norm residual of the reduced equation for a field on the reduced grid."""
    grid = w.grid
    I = grid.interior
    wu, wv = partial_derivatives(w)
    lap = laplacian(w).values[I]
    return float(np.max(np.abs(lap + red.lower_order(grid.z[I], w.values[I], wu.values[I], wv.values[I]))))


def max_principle_violation(f: ComplexField, boundary):
    """Largest excursion of Re/Im of ``f`` outside the range of its boundary data."""
    grid = f.grid
    tb = np.concatenate([grid.link_t, grid.boundary_t])
    vb = np.asarray(_as_boundary(boundary)(tb))
    vi = f.values[grid.interior]
    worst = 0.0
    for part in (np.real, np.imag):
        lo, hi = part(vb).min(), part(vb).max()
        worst = max(worst, float(np.max(part(vi) - hi)), float(np.max(lo - part(vi))))
    return max(worst, 0.0)
