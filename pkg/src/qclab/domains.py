"""Planar Jordan domains described by a closed boundary parametrization.

Every catalog domain is star-shaped about its ``center`` and therefore also
carries the polar-graph radius ``r(theta)`` used by the Theodorsen solver and
by the fast point-in-domain test.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PlanarDomain:
    """Jordan domain bounded by the curve ``t -> point(t)``, ``t in [0, 2pi)``.

    The curve is positively oriented. ``tangent`` and ``second`` evaluate the
    first and second derivatives with respect to ``t``.
    """

    name: str
    point: Callable[[np.ndarray], np.ndarray]
    tangent: Callable[[np.ndarray], np.ndarray]
    second: Callable[[np.ndarray], np.ndarray]
    smoothness: str = "C2a"
    center: complex = 0j
    radius: Optional[Callable[[np.ndarray], np.ndarray]] = None
    radius_deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None
    bbox: Optional[tuple] = None
    params: dict = field(default_factory=dict)

    def sample(self, m):
        """Return ``m`` equispaced parameters and the curve points there."""
        t = np.arange(m) * (TWO_PI / m)
        return t, np.asarray(self.point(t), dtype=complex)

    def bounding_box(self):
        if self.bbox is not None:
            return self.bbox
        _, z = self.sample(8192)
        return (z.real.min(), z.real.max(), z.imag.min(), z.imag.max())

    @property
    def is_star_shaped(self):
        return self.radius is not None

    def contains(self, z):
        """Boolean mask of points strictly inside the domain."""
        z = np.asarray(z, dtype=complex)
        if self.radius is not None:
            d = z - self.center
            return np.abs(d) < self.radius(np.mod(np.angle(d), TWO_PI))
        return _ray_cast(self, z)

    def is_simple(self, m=4096):
        """Check for self-intersections of the sampled boundary polyline."""
        _, z = self.sample(m)
        if np.any(np.abs(self.tangent(np.arange(m) * TWO_PI / m)) <= 0):
            return False
        if self.radius is not None:
            return bool(np.all(self.radius(np.arange(m) * TWO_PI / m) > 0))
        a, b = z, np.roll(z, -1)
        # O(m^2) segment test, done in chunks
        for i in range(0, m, 256):
            p, q = a[i:i + 256, None], b[i:i + 256, None]
            d1 = _orient(p, q, a[None, :])
            d2 = _orient(p, q, b[None, :])
            d3 = _orient(a[None, :], b[None, :], p)
            d4 = _orient(a[None, :], b[None, :], q)
            hit = (d1 * d2 < 0) & (d3 * d4 < 0)
            if np.any(hit):
                return False
        return True


def _orient(p, q, r):
    return ((q - p).conjugate() * (r - p)).imag


def _ray_cast(domain, z, m=4096):
    _, poly = domain.sample(m)
    a, b = poly, np.roll(poly, -1)
    inside = np.zeros(z.shape, dtype=bool)
    flat = z.ravel()
    out = inside.ravel()
    for i in range(0, flat.size, 2048):
        p = flat[i:i + 2048, None]
        cond = (a.imag[None, :] > p.imag) != (b.imag[None, :] > p.imag)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = a.real + (p.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
        out[i:i + 2048] = np.sum(cond & (p.real < xc), axis=1) % 2 == 1
    return out.reshape(z.shape)


def polar_domain(radius, radius_deriv, radius_second, center=0j, name="polar",
                 smoothness="C2a", bbox=None, params=None):
    """Star-shaped domain ``center + r(theta) e^{i theta}``."""
    c = complex(center)

    def point(t):
        return c + radius(t) * np.exp(1j * t)

    def tangent(t):
        return (radius_deriv(t) + 1j * radius(t)) * np.exp(1j * t)

    def second(t):
        r, r1, r2 = radius(t), radius_deriv(t), radius_second(t)
        return (r2 - r + 2j * r1) * np.exp(1j * t)

    return PlanarDomain(name=name, point=point, tangent=tangent, second=second,
                        smoothness=smoothness, center=c, radius=radius,
                        radius_deriv=radius_deriv, bbox=bbox, params=params or {})


def disk(radius=1.0, center=0j):
    """Disk of the given radius; the default is the closed unit disk."""
    if radius <= 0:
        raise ParameterError("disk radius must be positive")
    R = float(radius)
    c = complex(center)
    return polar_domain(lambda t: np.full(np.shape(t), R),
                        lambda t: np.zeros(np.shape(t)),
                        lambda t: np.zeros(np.shape(t)),
                        center=c, name="disk",
                        bbox=(c.real - R, c.real + R, c.imag - R, c.imag + R),
                        params={"radius": R, "center": [c.real, c.imag]})


def fourier_polar(coeffs, center=0j):
    """Polar graph ``r(theta) = c0 + sum_k a_k cos k theta + b_k sin k theta``.

    ``coeffs`` is ``[c0, a1, b1, a2, b2, ...]``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size == 0 or coeffs.size % 2 == 0:
        raise ParameterError("polar coefficient list must be [c0, a1, b1, ...]")
    c0 = coeffs[0]
    a = coeffs[1::2]
    b = coeffs[2::2]
    k = np.arange(1, a.size + 1)

    def _eval(t, order):
        t = np.asarray(t, dtype=float)
        kt = np.multiply.outer(t, k)
        cos, sin = np.cos(kt), np.sin(kt)
        if order == 0:
            return c0 + cos @ a + sin @ b
        if order == 1:
            return (-sin * k) @ a + (cos * k) @ b
        return (-cos * k**2) @ a + (-sin * k**2) @ b

    r = lambda t: _eval(t, 0)
    if np.min(r(np.linspace(0, TWO_PI, 4097))) <= 0:
        raise ParameterError("polar radius must stay positive")
    return polar_domain(r, lambda t: _eval(t, 1), lambda t: _eval(t, 2),
                        center=center, name="polar",
                        params={"coefficients": coeffs.tolist()})


def ellipse(a=1.0, b=0.6, center=0j):
    """Axis-aligned ellipse with semi-axes ``a`` and ``b``, in polar-graph form."""
    if a <= 0 or b <= 0:
        raise ParameterError("ellipse semi-axes must be positive")

    def q(t):
        return (b * np.cos(t))**2 + (a * np.sin(t))**2

    def r(t):
        return a * b / np.sqrt(q(t))

    def r1(t):
        dq = (a * a - b * b) * np.sin(2 * t)
        return -0.5 * a * b * q(t)**-1.5 * dq

    def r2(t):
        dq = (a * a - b * b) * np.sin(2 * t)
        d2q = 2 * (a * a - b * b) * np.cos(2 * t)
        return a * b * (0.75 * q(t)**-2.5 * dq**2 - 0.5 * q(t)**-1.5 * d2q)

    c = complex(center)
    return polar_domain(r, r1, r2, center=c, name="ellipse",
                        bbox=(c.real - a, c.real + a, c.imag - b, c.imag + b),
                        params={"a": a, "b": b})


DOMAIN_CATALOG = {
    "disk": disk,
    "ellipse": ellipse,
    "polar": fourier_polar,
}
