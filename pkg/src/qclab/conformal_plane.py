"""Conformal maps of the unit disk onto planar Jordan domains.

The catalog holds closed-form maps (identity, disk automorphisms, simple
polynomials).  :func:`theodorsen_map` computes the Riemann map of a domain
given as a polar graph ``r(theta) e^{i theta}`` by iterating Theodorsen's
integral equation

    theta(phi) = phi + K[log r(theta(phi))],

where ``K`` is the periodic conjugate-function operator, applied through the
FFT.  The map is then ``omega(z) = center + z exp(F(z))`` with ``F`` the
holomorphic function whose real part on the circle is ``log r(theta(phi))``
and whose imaginary part vanishes at the origin, so ``omega(0) = center`` and
``omega'(0) > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .domains import TWO_PI, PlanarDomain
from .errors import ConvergenceError, ParameterError


@dataclass(frozen=True)
class ConformalMap:
    """Holomorphic map with closed-form (or series) derivatives.

    ``source`` is ``"catalog"`` or ``"theodorsen(<n_modes>)"``.
    """

    forward: Callable
    derivative: Callable
    second_derivative: Optional[Callable] = None
    source: str = "catalog"
    name: str = ""
    info: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.forward(np.asarray(z, dtype=complex))

    def compose(self, inner: "ConformalMap"):
        """The map ``self o inner``."""
        f, fp, fpp = self.forward, self.derivative, self.second_derivative
        g, gp, gpp = inner.forward, inner.derivative, inner.second_derivative
        second = None
        if fpp is not None and gpp is not None:
            second = lambda z: fpp(g(z)) * gp(z)**2 + fp(g(z)) * gpp(z)
        return ConformalMap(lambda z: f(g(z)), lambda z: fp(g(z)) * gp(z), second,
                            source="catalog", name=f"{self.name}o{inner.name}")


def identity():
    """The identity map of the disk."""
    return ConformalMap(lambda z: np.asarray(z, dtype=complex),
                        lambda z: np.ones(np.shape(z), dtype=complex),
                        lambda z: np.zeros(np.shape(z), dtype=complex), name="identity")


def mobius_automorphism(a=0j, theta=0.0):
    """Disk automorphism ``e^{i theta} (z - a) / (1 - conj(a) z)``.

    Raises
    ------
    ParameterError
        If ``|a| >= 1``.
    """
    a = complex(a)
    if not abs(a) < 1:
        raise ParameterError("Mobius parameter must satisfy |a| < 1")
    rot = np.exp(1j * float(theta))
    ac = a.conjugate()
    k = rot * (1 - abs(a)**2)

    def forward(z):
        z = np.asarray(z, dtype=complex)
        return rot * (z - a) / (1 - ac * z)

    def derivative(z):
        return k / (1 - ac * np.asarray(z, dtype=complex))**2

    def second(z):
        return 2 * k * ac / (1 - ac * np.asarray(z, dtype=complex))**3

    return ConformalMap(forward, derivative, second, name="mobius",
                        info={"a": [a.real, a.imag], "theta": float(theta)})


def polynomial(coeffs):
    """``sum_k c_k z^k`` with ``coeffs = [c_0, c_1, ...]``."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0:
        raise ParameterError("empty coefficient list")
    d1 = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1, complex)
    d2 = np.polynomial.polynomial.polyder(d1) if d1.size > 1 else np.zeros(1, complex)
    ev = np.polynomial.polynomial.polyval
    return ConformalMap(lambda z: ev(np.asarray(z, dtype=complex), c),
                        lambda z: ev(np.asarray(z, dtype=complex), d1) + 0j,
                        lambda z: ev(np.asarray(z, dtype=complex), d2) + 0j,
                        name="polynomial", info={"coefficients": [[x.real, x.imag] for x in c]})


def square():
    """``w -> w^2``."""
    m = polynomial([0, 0, 1])
    return ConformalMap(m.forward, m.derivative, m.second_derivative, name="square")


def affine(a=1.0, b=0.0):
    """``z -> a z + b`` with ``a != 0``."""
    if complex(a) == 0:
        raise ParameterError("affine map needs a != 0")
    m = polynomial([b, a])
    return ConformalMap(m.forward, m.derivative, m.second_derivative, name="affine")


MAP_CATALOG = {
    "identity": identity,
    "mobius": mobius_automorphism,
    "square": square,
    "affine": affine,
    "polynomial": polynomial,
}


# ----------------------------------------------------------------------
# Theodorsen's method
# ----------------------------------------------------------------------
def _conjugate(values):
    """Periodic conjugate function of equispaced samples (zero mean output)."""
    c = np.fft.fft(values)
    m = values.size
    k = np.fft.fftfreq(m, 1.0 / m)
    return np.real(np.fft.ifft(-1j * np.sign(k) * c))


def _trig_eval(coeffs, m, phi):
    """Evaluate the trigonometric interpolant with FFT ``coeffs`` at ``phi``."""
    k = np.fft.fftfreq(m, 1.0 / m)
    c = coeffs / m
    if m % 2 == 0:
        c = c.copy()
        c[m // 2] *= 0.5
        k = np.concatenate([k, [m // 2]])
        c = np.concatenate([c, [c[m // 2]]])
    phi = np.asarray(phi, dtype=float)
    return np.real(np.exp(1j * np.multiply.outer(phi, k)) @ c)


def theodorsen_map(domain: PlanarDomain, n_modes=256, tol=1e-10, max_sweeps=500):
    """Riemann map of the unit disk onto a star-shaped domain.

    Parameters
    ----------
    domain : PlanarDomain
        Must carry its polar radius ``r(theta)`` about ``domain.center``.
    n_modes : int
        Number of equispaced collocation angles (a power of two).
    tol : float
        Stop when the sup-norm update of ``theta(phi)`` drops below ``tol``.

    Returns
    -------
    ConformalMap
        ``info`` records the residual history, the sweep count and the
        Theodorsen epsilon ``max |r'/r|`` (convergence needs it below 1).

    Raises
    ------
    ConvergenceError
        If the iteration diverges, stalls at ``max_sweeps``, or the boundary
        correspondence is not strictly increasing.
    """
    if domain.radius is None:
        raise ParameterError("Theodorsen's method needs a polar-graph domain")
    m = int(n_modes)
    if m < 8 or m & (m - 1):
        raise ParameterError("n_modes must be a power of two, at least 8")
    phi = TWO_PI * np.arange(m) / m
    log_r = lambda t: np.log(domain.radius(np.mod(t, TWO_PI)))
    eps = float(np.max(np.abs(domain.radius_deriv(phi) / domain.radius(phi)))) \
        if domain.radius_deriv is not None else np.nan
    theta = phi.copy()
    history = []
    for sweep in range(1, max_sweeps + 1):
        new = phi + _conjugate(log_r(theta))
        res = float(np.max(np.abs(new - theta)))
        history.append(res)
        theta = new
        if not np.isfinite(res) or res > 1e3:
            raise ConvergenceError("Theodorsen iteration diverged", history)
        if res <= tol:
            break
    else:
        raise ConvergenceError(f"Theodorsen iteration did not reach {tol:g} in "
                               f"{max_sweeps} sweeps", history)
    steps = np.diff(np.concatenate([theta, [theta[0] + TWO_PI]]))
    if np.any(steps <= 0):
        raise ConvergenceError("boundary correspondence is not monotone", history)

    U = log_r(theta)
    u = np.fft.fft(U) / m
    K = m // 2
    a = np.zeros(K + 1, dtype=complex)
    a[0] = u[0].real
    a[1:K] = 2 * u[1:K]
    a[K] = u[K]  # Nyquist mode split evenly between +K and -K
    da = a[1:] * np.arange(1, K + 1)
    dda = da[1:] * np.arange(1, K)
    c = complex(domain.center)

    def horner(coef, z):
        acc = np.zeros(np.shape(z), dtype=complex)
        for ck in coef[::-1]:
            acc = acc * z + ck
        return acc

    def forward(z):
        z = np.asarray(z, dtype=complex)
        return c + z * np.exp(horner(a, z))

    def derivative(z):
        z = np.asarray(z, dtype=complex)
        return np.exp(horner(a, z)) * (1 + z * horner(da, z))

    def second(z):
        z = np.asarray(z, dtype=complex)
        F1 = horner(da, z)
        return np.exp(horner(a, z)) * (2 * F1 + z * F1**2 + z * horner(dda, z))

    shift = np.fft.fft(theta - phi)

    def correspondence(p):
        p = np.asarray(p, dtype=float)
        return p + _trig_eval(shift, m, p)

    info = {"n_modes": m, "sweeps": len(history), "residual": history[-1],
            "history": history, "epsilon": eps,
            "coefficient_tail": float(np.max(np.abs(a[-8:])))}
    cmap = ConformalMap(forward, derivative, second, source=f"theodorsen({m})",
                        name=f"theodorsen:{domain.name}", info=info)
    object.__setattr__(cmap, "boundary_correspondence", correspondence)
    object.__setattr__(cmap, "inverse_correspondence",
                       _inverse_monotone(correspondence, m))
    return cmap


def _inverse_monotone(corr, m):
    """Inverse of a lift ``theta(phi) = phi + periodic`` by vectorized bisection."""

    def inverse(theta):
        th = np.asarray(theta, dtype=float)
        lo = th - np.pi
        hi = th + np.pi
        # theta(phi) - phi is bounded by pi for any monotone lift fixed at the mean
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = corr(mid) < th
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    return inverse


class DerivativeBounds(NamedTuple):
    """Extrema of ``|omega'|`` over a sample of the closed disk."""

    inf_abs: float
    sup_abs: float
    h: float
    anomaly: bool


def derivative_bounds(cmap: ConformalMap, grid, smoothness="C2a"):
    """``(inf |omega'|, sup |omega'|)`` over ``grid.sample_points``.

    A vanishing infimum contradicts the Kellogg-Warschawski theorem for a
    smooth target domain; it is returned as ``anomaly=True`` instead of
    raising.
    """
    pts = grid.sample_points
    d = np.abs(cmap.derivative(pts))
    lo, hi = float(d.min()), float(d.max())
    anomaly = bool(smoothness in ("C1a", "C2a") and lo <= 1e-8 * max(hi, 1e-300))
    return DerivativeBounds(lo, hi, grid.h, anomaly)
