"""Disk-like surface patches in isothermal coordinates.

A :class:`SurfacePatch` is a closed-form immersion ``X`` of the closed unit
disk into ``R^l`` together with hand-coded first and second derivatives.
Points of the parameter disk are passed as complex numbers ``w = u + iv``;
every evaluator returns an array of shape ``w.shape + (l,)``.

For isothermal patches (``|X_u| = |X_v|`` and ``<X_u, X_v> = 0``) the metric
is ``rho |dw|^2`` with ``rho = |X_u|^2``, and ``(log rho)_w`` is the only
ingredient of the rho-harmonic map equation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractViolation, ParameterError, SingularityError
from .field import ComplexField, DiskGrid, partial_derivatives

ISOTHERMAL_TOL = 1e-10


@dataclass(frozen=True)
class SurfacePatch:
    """Parametrized immersion ``X: closed unit disk -> R^l`` with analytic derivatives."""

    name: str
    X: Callable
    X_u: Callable
    X_v: Callable
    X_uu: Callable
    X_uv: Callable
    X_vv: Callable
    l: int = 3
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.l < 3:
            raise ParameterError("ambient dimension must be at least 3")

    def scaled(self, lam):
        """The patch ``lam * X``."""
        lam = float(lam)
        f = lambda g: (lambda w: lam * g(w))
        return SurfacePatch(f"{lam:g}*{self.name}", f(self.X), f(self.X_u), f(self.X_v),
                            f(self.X_uu), f(self.X_uv), f(self.X_vv), self.l,
                            dict(self.params, scale_factor=lam))


def _w(w):
    w = np.asarray(w, dtype=complex)
    return w.real, w.imag


def _stack(*comps):
    return np.stack(np.broadcast_arrays(*comps), axis=-1).astype(float)


def _dot(a, b):
    return np.sum(a * b, axis=-1)


# ----------------------------------------------------------------------
# catalog
# ----------------------------------------------------------------------
def flat():
    """The plane ``X(u, v) = (u, v, 0)``."""
    return scaled_flat(1.0, name="flat")


def scaled_flat(scale=2.0, name="scaled_flat"):
    """The plane stretched by ``scale``: ``X = (s u, s v, 0)``."""
    s = float(scale)
    if s <= 0:
        raise ParameterError("scale must be positive")
    zero = lambda w: _stack(*(np.zeros(np.shape(w)),) * 3)
    return SurfacePatch(
        name,
        X=lambda w: _stack(s * _w(w)[0], s * _w(w)[1], 0.0 * _w(w)[0]),
        X_u=lambda w: _stack(np.full(np.shape(w), s), 0.0, 0.0),
        X_v=lambda w: _stack(np.zeros(np.shape(w)), s, 0.0),
        X_uu=zero, X_uv=zero, X_vv=zero,
        params={"scale": s})


def sphere_cap(radius=1.0, scale=1.0):
    """Inverse stereographic projection onto a sphere of the given radius.

    ``X(w) = radius * (2u, 2v, u^2 + v^2 - 1) / (1 + u^2 + v^2)`` evaluated at
    ``scale * w``; with ``scale = 1`` the unit disk covers the lower
    hemisphere.
    """
    R, s = float(radius), float(scale)
    if R <= 0 or s <= 0:
        raise ParameterError("sphere radius and scale must be positive")

    def parts(w):
        # X / R = F q with F = (2u, 2v, u^2 + v^2 - 1) and q = 1 / (1 + u^2 + v^2)
        u, v = _w(w)
        u, v = s * u, s * v
        d = 1.0 + u * u + v * v
        q = 1.0 / d
        zero, two = 0.0 * u, 2.0 + 0.0 * u
        return {
            "F": (2 * u, 2 * v, u * u + v * v - 1),
            "Fu": (two, zero, 2 * u), "Fv": (zero, two, 2 * v),
            "Fuu": (zero, zero, two), "Fuv": (zero, zero, zero), "Fvv": (zero, zero, two),
            "q": q, "qu": -2 * u * q * q, "qv": -2 * v * q * q,
            "quu": (8 * u * u - 2 * d) * q**3, "quv": 8 * u * v * q**3,
            "qvv": (8 * v * v - 2 * d) * q**3,
        }

    def X(w):
        P = parts(w)
        return R * _stack(*(f * P["q"] for f in P["F"]))

    def first(x):
        def deriv(w):
            P = parts(w)
            return R * s * _stack(*(a * P["q"] + b * P["q" + x]
                                    for a, b in zip(P["F" + x], P["F"])))
        return deriv

    def second(x, y):
        def deriv(w):
            P = parts(w)
            return R * s * s * _stack(*(
                fxy * P["q"] + fx * P["q" + y] + fy * P["q" + x] + f * P["q" + x + y]
                for fxy, fx, fy, f in zip(P["F" + x + y], P["F" + x], P["F" + y], P["F"])))
        return deriv

    X_u, X_v = first("u"), first("v")
    X_uu, X_uv, X_vv = second("u", "u"), second("u", "v"), second("v", "v")

    return SurfacePatch("sphere_cap", X, X_u, X_v, X_uu, X_uv, X_vv,
                        params={"radius": R, "scale": s})


def cylinder(radius=1.0):
    """``X = (a cos(u/a), a sin(u/a), v)``: isothermal with ``rho = 1``."""
    a = float(radius)
    if a <= 0:
        raise ParameterError("cylinder radius must be positive")

    def X(w):
        u, v = _w(w)
        return _stack(a * np.cos(u / a), a * np.sin(u / a), v)

    def X_u(w):
        u, _ = _w(w)
        return _stack(-np.sin(u / a), np.cos(u / a), 0.0 * u)

    def X_v(w):
        u, _ = _w(w)
        return _stack(0.0 * u, 0.0 * u, 1.0 + 0.0 * u)

    def X_uu(w):
        u, _ = _w(w)
        return _stack(-np.cos(u / a) / a, -np.sin(u / a) / a, 0.0 * u)

    zero = lambda w: _stack(*(np.zeros(np.shape(w)),) * 3)
    return SurfacePatch("cylinder", X, X_u, X_v, X_uu, zero, zero, params={"radius": a})


def catenoid(scale=1.0):
    """``X = a (cosh v cos u, cosh v sin u, v)``: ``rho = a^2 cosh^2 v``."""
    a = float(scale)
    if a <= 0:
        raise ParameterError("catenoid scale must be positive")

    def X(w):
        u, v = _w(w)
        return a * _stack(np.cosh(v) * np.cos(u), np.cosh(v) * np.sin(u), v)

    def X_u(w):
        u, v = _w(w)
        return a * _stack(-np.cosh(v) * np.sin(u), np.cosh(v) * np.cos(u), 0.0 * u)

    def X_v(w):
        u, v = _w(w)
        return a * _stack(np.sinh(v) * np.cos(u), np.sinh(v) * np.sin(u), 1.0 + 0.0 * u)

    def X_uu(w):
        u, v = _w(w)
        return a * _stack(-np.cosh(v) * np.cos(u), -np.cosh(v) * np.sin(u), 0.0 * u)

    def X_uv(w):
        u, v = _w(w)
        return a * _stack(-np.sinh(v) * np.sin(u), np.sinh(v) * np.cos(u), 0.0 * u)

    def X_vv(w):
        u, v = _w(w)
        return a * _stack(np.cosh(v) * np.cos(u), np.cosh(v) * np.sin(u), 0.0 * u)

    return SurfacePatch("catenoid", X, X_u, X_v, X_uu, X_uv, X_vv, params={"scale": a})


def enneper():
    """Enneper's minimal surface: ``rho = (1 + u^2 + v^2)^2``."""

    def X(w):
        u, v = _w(w)
        return _stack(u - u**3 / 3 + u * v * v, v - v**3 / 3 + u * u * v, u * u - v * v)

    def X_u(w):
        u, v = _w(w)
        return _stack(1 - u * u + v * v, 2 * u * v, 2 * u)

    def X_v(w):
        u, v = _w(w)
        return _stack(2 * u * v, 1 - v * v + u * u, -2 * v)

    def X_uu(w):
        u, v = _w(w)
        return _stack(-2 * u, 2 * v, 2.0 + 0.0 * u)

    def X_uv(w):
        u, v = _w(w)
        return _stack(2 * v, 2 * u, 0.0 * u)

    def X_vv(w):
        u, v = _w(w)
        return _stack(2 * u, -2 * v, -2.0 + 0.0 * u)

    return SurfacePatch("enneper", X, X_u, X_v, X_uu, X_uv, X_vv)


def paraboloid():
    """The graph ``X = (u, v, u^2 + v^2)``; not isothermal, kept as a negative control."""

    def X(w):
        u, v = _w(w)
        return _stack(u, v, u * u + v * v)

    def X_u(w):
        u, _ = _w(w)
        return _stack(1.0 + 0.0 * u, 0.0 * u, 2 * u)

    def X_v(w):
        _, v = _w(w)
        return _stack(0.0 * v, 1.0 + 0.0 * v, 2 * v)

    def const_z(c):
        return lambda w: _stack(np.zeros(np.shape(w)), 0.0, c)

    return SurfacePatch("paraboloid", X, X_u, X_v, const_z(2.0), const_z(0.0), const_z(2.0))


SURFACE_CATALOG = {
    "flat": flat,
    "scaled_flat": scaled_flat,
    "sphere_cap": sphere_cap,
    "cylinder": cylinder,
    "catenoid": catenoid,
    "enneper": enneper,
    "paraboloid": paraboloid,
}


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------
def metric_tensor(p: SurfacePatch, point):
    """First fundamental form ``(E, F, G)`` at ``point`` (complex, scalar or array).

    Raises
    ------
    SingularityError
        If ``EG - F^2`` vanishes (relative to ``E G``) at some point.
    """
    w = np.asarray(point, dtype=complex)
    xu, xv = p.X_u(w), p.X_v(w)
    E, F, G = _dot(xu, xu), _dot(xu, xv), _dot(xv, xv)
    det = E * G - F * F
    if np.any(det <= 1e-14 * np.maximum(E * G, 1e-300)):
        raise SingularityError(f"patch {p.name!r} is not an immersion at some sample point")
    if w.ndim == 0:
        return float(E), float(F), float(G)
    return E, F, G


def _points(grid_or_points):
    if isinstance(grid_or_points, DiskGrid):
        return grid_or_points.sample_points
    return np.asarray(grid_or_points, dtype=complex).ravel()


def conformality_residual(p: SurfacePatch, grid):
    """``max | |X_u|^2 - |X_v|^2 | + |<X_u, X_v>|`` over the grid's closed sample set."""
    w = _points(grid)
    xu, xv = p.X_u(w), p.X_v(w)
    return float(np.max(np.abs(_dot(xu, xu) - _dot(xv, xv)) + np.abs(_dot(xu, xv))))


def _require_isothermal(p, w):
    xu = p.X_u(w)
    res = conformality_residual(p, w)
    scale = float(np.max(_dot(xu, xu)))
    if res > ISOTHERMAL_TOL * max(scale, 1.0):
        raise ContractViolation(f"patch {p.name!r} is not isothermal "
                                f"(conformality residual {res:.3e})")


@dataclass(frozen=True)
class ConformalFactor:
    """``rho = |X_u|^2`` and ``(log rho)_w`` as evaluators of complex points.

    ``radius`` bounds the closed disk on which the factor is defined.
    """

    rho: Callable
    log_rho_w: Callable
    radius: float = 1.0
    name: str = ""

    @classmethod
    def constant(cls, value=1.0):
        lam = float(value)
        if lam <= 0:
            raise ParameterError("a conformal factor must be positive")
        return cls(lambda w: np.full(np.shape(w), lam),
                   lambda w: np.zeros(np.shape(w), dtype=complex),
                   radius=np.inf, name=f"constant({lam:g})")


def conformal_factor(p: SurfacePatch, check_grid=None):
    """Conformal factor of an isothermal patch.

    ``(log rho)_w = (<X_uu, X_u> - i <X_uv, X_u>) / |X_u|^2``.  The
    equivalent form ``(<X_uu, X_u> + i <X_uu, X_v>) / |X_u|^2`` is evaluated
    on ``check_grid`` (default: a 65-node disk grid) and must agree.
    """
    w = _points(check_grid if check_grid is not None else DiskGrid(n=65))
    _require_isothermal(p, w)

    def rho(z):
        xu = p.X_u(np.asarray(z, dtype=complex))
        return _dot(xu, xu)

    def log_rho_w(z):
        z = np.asarray(z, dtype=complex)
        xu, xuu, xuv = p.X_u(z), p.X_uu(z), p.X_uv(z)
        return (_dot(xuu, xu) - 1j * _dot(xuv, xu)) / _dot(xu, xu)

    xu, xv, xuu = p.X_u(w), p.X_v(w), p.X_uu(w)
    alt = (_dot(xuu, xu) + 1j * _dot(xuu, xv)) / _dot(xu, xu)
    gap = float(np.max(np.abs(alt - log_rho_w(w))))
    scale = max(float(np.max(np.abs(alt))), 1.0)
    if gap > 1e-9 * scale:
        raise ContractViolation(f"the two forms of (log rho)_w disagree by {gap:.3e}")
    return ConformalFactor(rho, log_rho_w, radius=1.0, name=p.name)


@dataclass(frozen=True)
class ChartConstants:
    """Extremal chart quantities over a sample of the closed unit disk.

    ``c = min |X_u|``, ``C = max(|X_uu| + |X_uv| + |X_vv|)`` and
    ``M_prime = max |(log rho)_w|``.  ``ratio_bound = max 2|X_uu|/|X_u|``
    is the intermediate quantity of the pointwise chain
    ``|(log rho)_w| <= 2|X_uu|/|X_u|``; ``h`` and ``n_samples`` record the
    sampling resolution.
    """

    c: float
    C: float
    M_prime: float
    ratio_bound: float
    h: float
    n_samples: int

    @property
    def C_over_c(self):
        return self.C / self.c

    def as_dict(self):
        return {"c": self.c, "C": self.C, "M_prime": self.M_prime,
                "ratio_bound": self.ratio_bound, "C_over_c": self.C_over_c,
                "h": self.h, "n_samples": self.n_samples}


def chart_constants(p: SurfacePatch, grid: DiskGrid):
    """Compute :class:`ChartConstants` over ``grid.sample_points``.

    Raises
    ------
    ContractViolation
        If the patch is not isothermal, or if ``|(log rho)_w| > 2|X_uu|/|X_u|``
        at some node.
    """
    w = grid.sample_points
    _require_isothermal(p, w)
    xu, xuu, xuv, xvv = p.X_u(w), p.X_uu(w), p.X_uv(w), p.X_vv(w)
    nxu = np.sqrt(_dot(xu, xu))
    nuu = np.sqrt(_dot(xuu, xuu))
    second = nuu + np.sqrt(_dot(xuv, xuv)) + np.sqrt(_dot(xvv, xvv))
    lrw = np.abs((_dot(xuu, xu) - 1j * _dot(xuv, xu)) / nxu**2)
    bound = 2 * nuu / nxu
    if np.any(lrw > bound * (1 + 1e-12) + 1e-300):
        raise ContractViolation("pointwise bound |(log rho)_w| <= 2|X_uu|/|X_u| fails")
    return ChartConstants(c=float(nxu.min()), C=float(second.max()), M_prime=float(lrw.max()),
                          ratio_bound=float(bound.max()), h=grid.h, n_samples=int(w.size))


def weighted_energy(g: ComplexField, rho: ConformalFactor):
    """Quadrature of ``rho(g) (|g_x|^2 + |g_y|^2)`` with the grid's cell weights.

    Raises
    ------
    ContractViolation
        If ``g`` leaves the closed disk on which ``rho`` is defined.
    """
    grid = g.grid
    I = grid.interior
    vals = g.values[I]
    if np.any(np.abs(vals) > rho.radius * (1 + 1e-12)):
        raise ContractViolation("g leaves the domain of the conformal factor")
    gx, gy = partial_derivatives(g)
    dens = np.asarray(rho.rho(vals)) * (np.abs(gx.values[I])**2 + np.abs(gy.values[I])**2)
    return float(np.dot(grid.weights[I], dens))


def sample_patch(p: SurfacePatch, grid: DiskGrid, g=None):
    """The ``R^l``-valued field ``X o g`` (``X`` itself when ``g`` is None)."""
    if g is None:
        return ComplexField.from_function(grid, p.X)
    inner = g.func
    if inner is None:
        raise ContractViolation("composition needs an evaluable inner map")
    return ComplexField.from_function(grid, lambda z: p.X(inner(z)))
