"""Quasiconformality and boundary-regularity diagnostics for sampled maps.

Every diagnostic is a pure reduction over a :class:`~qclab.field.ComplexField`
and returns a small dataclass with an ``as_dict`` method suitable for JSON
export.  Derivatives are the grid's finite-difference Wirtinger derivatives;
gradient norms use the Hilbert-Schmidt convention
``|grad f|^2 = |f_x|^2 + |f_y|^2`` unless a field name says ``operator``.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .conformal_plane import ConformalMap
from .errors import ContractViolation, ParameterError, ResolutionError
from .field import (ComplexField, gradient_norm_sq, laplacian, partial_derivatives,
                    wirtinger_derivatives)

DEGENERACY_FLOOR = 1e-8
PLATEAU_SPREAD = 0.15
CHAIN_TOL = 1e-9


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def to_json(report, path=None):
    """Serialize a diagnostic report (dataclass or dict) deterministically."""
    data = report.as_dict() if hasattr(report, "as_dict") else report
    text = json.dumps(_jsonable(data), indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def _mask(f, where):
    sel = f.grid.interior.copy()
    if where is None:
        return sel
    if callable(where):
        return sel & np.asarray(where(f.grid.z), dtype=bool)
    return sel & np.asarray(where, dtype=bool)


# ----------------------------------------------------------------------
# Beltrami coefficient
# ----------------------------------------------------------------------
@dataclass
class BeltramiField:
    """Complex dilatation ``mu = f_zbar / f_z`` at interior nodes.

    ``k`` is the maximum of ``|mu|`` over nodes whose ``|f_z|`` exceeds the
    degeneracy ``floor``; ``degenerate_count`` counts the others.  ``nu`` is
    the second complex dilatation ``conj(f_zbar) / f_z``, with ``|nu| = |mu|``.
    Degenerate and unselected nodes hold NaN.
    """

    mu: ComplexField
    k: float
    degenerate_count: int
    floor: float
    n_nodes: int
    nu: Optional[ComplexField] = None

    @property
    def is_qc(self):
        return bool(self.k < 1 and self.degenerate_count == 0)

    def as_dict(self):
        return {"k": self.k, "degenerate_count": self.degenerate_count, "floor": self.floor,
                "n_nodes": self.n_nodes, "is_qc": self.is_qc}

    def to_csv(self, path):
        g = self.mu.grid
        sel = ~np.isnan(self.mu.values)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "mu_re", "mu_im", "abs_mu"])
            for z, m in zip(g.z[sel], self.mu.values[sel]):
                w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(m.real)),
                            repr(float(m.imag)), repr(float(abs(m)))])


def beltrami(f: ComplexField, where=None):
    """Beltrami coefficient and dilatation bound of a sampled complex map.

    Parameters
    ----------
    where : bool array or callable of the node positions, optional
        Restrict the diagnostic to a subset of interior nodes.

    Raises
    ------
    ContractViolation
        If every node is degenerate.
    """
    grid = f.grid
    fz, fzb = wirtinger_derivatives(f)
    sel = _mask(f, where)
    if not np.any(sel):
        raise ParameterError("no interior nodes selected")
    a, b = fz.values[sel], fzb.values[sel]
    scale = float(np.sqrt(np.mean(2 * (np.abs(a)**2 + np.abs(b)**2))))
    floor = DEGENERACY_FLOOR * scale
    ok = np.abs(a) > floor
    if not np.any(ok):
        raise ContractViolation("f_z vanishes at every node")
    mu_vals = np.full(a.shape, np.nan, dtype=complex)
    mu_vals[ok] = b[ok] / a[ok]
    mu = np.full((grid.n, grid.n), np.nan, dtype=complex)
    mu[sel] = mu_vals
    nu = np.full((grid.n, grid.n), np.nan, dtype=complex)
    nu[sel] = np.where(ok, np.conj(b) / np.where(ok, a, 1), np.nan)
    return BeltramiField(_nan_field(grid, mu), k=float(np.max(np.abs(mu_vals[ok]))),
                         degenerate_count=int(np.count_nonzero(~ok)), floor=floor,
                         n_nodes=int(a.size), nu=_nan_field(grid, nu))


def _nan_field(grid, values):
    """Interior-support field that tolerates NaN at excluded nodes."""
    f = object.__new__(ComplexField)
    object.__setattr__(f, "grid", grid)
    object.__setattr__(f, "values", values)
    object.__setattr__(f, "trace", np.full(grid.n_links, np.nan, dtype=values.dtype))
    object.__setattr__(f, "func", None)
    object.__setattr__(f, "support", "interior")
    return f


# ----------------------------------------------------------------------
# Poisson differential inequality
# ----------------------------------------------------------------------
@dataclass
class PoissonFit:
    """``N(M) = max (|Laplacian f| - M |grad f|^2)_+`` over a sweep of ``M``."""

    curve: list
    chosen: tuple
    residual_ok: bool
    scale: float
    residual: float

    def N_at(self, M):
        """``N(M)`` for a sweep value ``M``."""
        for m, n in self.curve:
            if np.isclose(m, M, rtol=0, atol=1e-15):
                return n
        raise ParameterError(f"M = {M} is not on the sweep")

    def as_dict(self):
        return {"curve": [list(p) for p in self.curve], "chosen": list(self.chosen),
                "residual_ok": self.residual_ok, "scale": self.scale, "residual": self.residual}

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["M", "N"])
            for m, n in self.curve:
                w.writerow([repr(float(m)), repr(float(n))])


def poisson_N(f: ComplexField, M, where=None):
    """``N(M)`` for each value in ``M`` (vectorized exact max-reduction)."""
    sel = _mask(f, where)
    lap = np.abs(laplacian(f).values[sel])
    if lap.ndim > 1:
        lap = np.linalg.norm(lap, axis=1)
    g2 = gradient_norm_sq(f).values[sel]
    M = np.atleast_1d(np.asarray(M, dtype=float))
    return np.array([float(np.max(np.maximum(lap - m * g2, 0.0))) for m in M])


def fit_poisson_constants(f: ComplexField, M_sweep: Sequence[float], scale=None,
                          residual=0.0, where=None):
    """Fit ``|Laplacian f| <= M |grad f|^2 + N`` along a sweep of ``M``.

    The chosen pair minimizes ``M + N / scale``; ``scale`` defaults to
    ``max |grad f|^2`` so both terms are measured in the same units.
    ``residual_ok`` states whether the chosen ``N`` is within ten times the
    supplied solver ``residual`` (i.e. consistent with ``N = 0``).
    """
    M_sweep = np.sort(np.asarray(list(M_sweep), dtype=float))
    if M_sweep.size == 0:
        raise ParameterError("empty M sweep")
    if np.any(M_sweep < 0):
        raise ParameterError("M must be non-negative")
    Ns = poisson_N(f, M_sweep, where)
    if scale is None:
        scale = float(np.max(gradient_norm_sq(f).values[_mask(f, where)]))
        scale = scale if scale > 0 else 1.0
    score = M_sweep + Ns / scale
    i = int(np.argmin(score))
    curve = [(float(m), float(n)) for m, n in zip(M_sweep, Ns)]
    chosen = (float(M_sweep[i]), float(Ns[i]))
    return PoissonFit(curve, chosen, bool(chosen[1] <= 10 * residual), float(scale),
                      float(residual))


# ----------------------------------------------------------------------
# component inequality
# ----------------------------------------------------------------------
@dataclass
class ComponentReport:
    """Pointwise checks for ``u = Re f`` and ``v = Im f`` of a quasiconformal ``f``.

    ``identity_error`` is the max relative deviation of ``A/B`` from
    ``|1+nu|^2/|1-nu|^2``.  ``sandwich_violations`` counts nodes outside
    ``[(1-k)^2/(1+k)^2, (1+k)^2/(1-k)^2]``.  The Poisson inequality for the
    components is tested with two constants: ``K M`` (``K = (1+k)^2/(1-k)^2``)
    and the always-valid ``(1 + K) M``; violation counts and worst excess are
    reported for each.
    """

    k: float
    K: float
    identity_error: float
    sandwich_violations: int
    excluded: int
    n_nodes: int
    violations_KM: int
    excess_KM: float
    violations_1pKM: int
    excess_1pKM: float

    def as_dict(self):
        return asdict(self)


def check_component_inequality(f: ComplexField, M=0.0, N=0.0, k=None, where=None):
    """Verify the component Poisson inequalities of a quasiconformal map.

    Raises
    ------
    ContractViolation
        If the measured (or supplied) ``k`` is not below 1.
    """
    bel = beltrami(f, where)
    k = bel.k if k is None else float(k)
    if not k < 1:
        raise ContractViolation(f"map is not quasiconformal (k = {k:.3g})")
    K = (1 + k)**2 / (1 - k)**2
    sel = _mask(f, where)
    fz, fzb = wirtinger_derivatives(f)
    a, b = fz.values[sel], fzb.values[sel]
    ux, uy = partial_derivatives(f.real)
    vx, vy = partial_derivatives(f.imag)
    A = ux.values[sel]**2 + uy.values[sel]**2
    B = vx.values[sel]**2 + vy.values[sel]**2
    keep = (B > 0) & (np.abs(a) > bel.floor)
    nu = np.conj(b[keep]) / a[keep]
    ratio = A[keep] / B[keep]
    pred = np.abs(1 + nu)**2 / np.abs(1 - nu)**2
    ident = float(np.max(np.abs(ratio - pred) / pred)) if ratio.size else 0.0
    lo, hi = 1 / K, K
    tol = 1e-12
    sandwich = int(np.count_nonzero((ratio < lo * (1 - tol)) | (ratio > hi * (1 + tol))))
    lap_u = np.abs(laplacian(f.real).values[sel])
    lap_v = np.abs(laplacian(f.imag).values[sel])

    def check(const):
        ex = np.concatenate([lap_u - (const * A + N), lap_v - (const * B + N)])
        scale = 1e-9 * max(1.0, float(np.max(np.concatenate([lap_u, lap_v]))))
        return int(np.count_nonzero(ex > scale)), float(max(0.0, ex.max()))

    vK, eK = check(M * K)
    v1, e1 = check(M * (1 + K))
    return ComponentReport(k=k, K=K, identity_error=ident, sandwich_violations=sandwich,
                           excluded=int(np.count_nonzero(~keep)), n_nodes=int(sel.sum()),
                           violations_KM=vK, excess_KM=eK, violations_1pKM=v1, excess_1pKM=e1)


# ----------------------------------------------------------------------
# composition identities
# ----------------------------------------------------------------------
@dataclass
class CompositionReport:
    """Deviations between direct differences of ``fhat = phi o f o eta`` and the chain rule.

    ``d_dz``: ``fhat_z`` against ``phi'(f) f_z(eta) eta'``.
    ``d_dzbar``: ``fhat_zbar`` against ``phi'(f) f_zbar(eta) conj(eta')``.
    ``d_dzbar_modulus``: ``|fhat_zbar|`` against ``|phi'(f) f_zbar(eta) eta'|``.
    ``d_laplacian``: ``Laplacian fhat`` against
    ``4 (phi'' f_z f_zbar + phi' f_{z zbar})(eta) |eta'|^2``.
    """

    d_dz: float
    d_dzbar: float
    d_dzbar_modulus: float
    d_laplacian: float
    n_valid: int
    n_excluded: int
    h: float

    @property
    def max_deviation(self):
        return max(self.d_dz, self.d_dzbar, self.d_laplacian)

    def as_dict(self):
        d = asdict(self)
        d["max_deviation"] = self.max_deviation
        return d


def _central(fn, p, h):
    """Central-difference ``f_z``, ``f_zbar`` and Laplacian of ``fn`` at points ``p``."""
    c = fn(p)
    e, w, n, s = fn(p + h), fn(p - h), fn(p + 1j * h), fn(p - 1j * h)
    fx, fy = (e - w) / (2 * h), (n - s) / (2 * h)
    lap = (e + w + n + s - 4 * c) / (h * h)
    return c, 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy), lap


def composition_laplacian_check(phi: ConformalMap, f: ComplexField, eta: ConformalMap,
                                where=None, radius=None):
    """Check the first- and second-order chain rules for ``phi o f o eta``.

    Both sides use central differences with the grid spacing ``h``: the
    left side differences ``fhat`` at the grid nodes, the right side
    differences ``f`` at the pulled-back points ``eta(z)``.  Nodes whose
    stencils (on either side) leave the closed disk of the given ``radius``
    (default: the domain's disk radius) are excluded and counted.
    """
    if f.func is None:
        raise ContractViolation("composition check needs an evaluable field (f.func)")
    grid = f.grid
    h = grid.h
    R = radius if radius is not None else grid.domain.params.get("radius", 1.0)
    z = grid.z[_mask(f, where) & grid.regular]
    p = eta(z)
    ok = (np.abs(z) + h <= R) & (np.abs(p - grid.domain.center) + h <= R)
    z, p = z[ok], p[ok]
    fhat = lambda q: phi(f.func(eta(q)))
    _, hz, hzb, hlap = _central(fhat, z, h)
    fc, fz, fzb, flap = _central(f.func, p, h)
    d1, d2 = phi.derivative(fc), phi.second_derivative(fc)
    ep = eta.derivative(z)
    rz = d1 * fz * ep
    rzb = d1 * fzb * np.conj(ep)
    rlap = 4 * (d2 * fz * fzb + d1 * flap / 4) * np.abs(ep)**2
    mx = lambda a: float(np.max(a)) if a.size else 0.0
    return CompositionReport(
        d_dz=mx(np.abs(hz - rz)), d_dzbar=mx(np.abs(hzb - rzb)),
        d_dzbar_modulus=mx(np.abs(np.abs(hzb) - np.abs(d1 * fzb * ep))),
        d_laplacian=mx(np.abs(hlap - rlap)), n_valid=int(z.size),
        n_excluded=int(np.count_nonzero(~ok)), h=h)


# ----------------------------------------------------------------------
# gradient chain
# ----------------------------------------------------------------------
@dataclass
class GradientChainReport:
    """Slack of ``(1-k)|d fhat| <= |d fhat - conj(dbar fhat)| <= 2|s_z|`` and of
    ``|d fhat| + |dbar fhat| <= sqrt(2) (1+k)/(1-k) b_t`` with ``s = Im fhat``.

    ``b_t = sup |grad s|`` (Hilbert-Schmidt).  Slacks are ``rhs - lhs``; a
    violation is a slack below ``-1e-9`` times the local scale.
    """

    k: float
    b_t: float
    min_slack_left: float
    min_slack_middle: float
    min_slack_global: float
    violations: int

    def as_dict(self):
        return asdict(self)


def verify_gradient_chain(f_hat: ComplexField, where=None):
    """Evaluate both gradient inequalities at every interior node.

    Raises
    ------
    ContractViolation
        If the measured ``k`` is not below 1.
    """
    bel = beltrami(f_hat, where)
    k = bel.k
    if not k < 1:
        raise ContractViolation(f"f_hat is not quasiconformal (k = {k:.3g})")
    sel = _mask(f_hat, where)
    fz, fzb = wirtinger_derivatives(f_hat)
    a, b = fz.values[sel], fzb.values[sel]
    sz, _ = wirtinger_derivatives(f_hat.imag)
    s_z = sz.values[sel]
    b_t = float(np.max(2 * np.abs(s_z)))
    left = (1 - k) * np.abs(a)
    middle = np.abs(a - np.conj(b))
    right = 2 * np.abs(s_z)
    op = np.abs(a) + np.abs(b)
    bound = np.sqrt(2) * (1 + k) / (1 - k) * b_t
    sl1, sl2, sl3 = middle - left, right - middle, bound - op
    scale = CHAIN_TOL * np.maximum(op, 1.0)
    viol = int(np.count_nonzero(sl1 < -scale) + np.count_nonzero(sl2 < -scale)
               + np.count_nonzero(sl3 < -scale))
    return GradientChainReport(k=k, b_t=b_t, min_slack_left=float(sl1.min()),
                               min_slack_middle=float(sl2.min()),
                               min_slack_global=float(sl3.min()), violations=viol)


# ----------------------------------------------------------------------
# boundary collars
# ----------------------------------------------------------------------
@dataclass
class CollarProfile:
    """Operator-norm gradient sup over dyadic boundary collars.

    ``collars`` lists ``(delta_j, sup_grad, count)`` for the bands
    ``delta_j / 2 < dist <= delta_j`` with ``delta_j`` decreasing.  The
    verdict is ``"plateau"`` when the last three sups spread by less than
    15%, otherwise ``"growth"`` with ``exponent`` the least-squares slope of
    ``log sup_grad`` against ``log delta`` over the inner half of the
    collars.
    """

    collars: list
    lipschitz_estimate: float
    verdict: str
    exponent: float
    spread: float

    def as_dict(self):
        return {"collars": [list(c) for c in self.collars],
                "lipschitz_estimate": self.lipschitz_estimate, "verdict": self.verdict,
                "exponent": self.exponent, "spread": self.spread}

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["delta", "sup_grad", "count"])
            for d, s, c in self.collars:
                w.writerow([repr(float(d)), repr(float(s)), int(c)])


def _collar_bands(grid, n_collars, delta0):
    dist = grid.distance[grid.interior]
    if delta0 is None:
        delta0 = 0.5 * float(np.nanmax(dist))
    if n_collars is None:
        n_collars = max(1, int(np.floor(np.log2(delta0 / (2 * grid.h)))) + 1)
    deltas = delta0 * 0.5**np.arange(n_collars)
    return dist, deltas


def collar_profile(f: ComplexField, n_collars: Optional[int] = None, delta0=None):
    """Lipschitz probe: sup of ``|f_z| + |f_zbar|`` over dyadic boundary collars.

    By default the collars start at half the inradius and stop once the
    inner edge ``delta_j / 2`` drops below ``h``.

    Raises
    ------
    ResolutionError
        If fewer than three collars contain nodes.
    """
    grid = f.grid
    dist, deltas = _collar_bands(grid, n_collars, delta0)
    fz, fzb = wirtinger_derivatives(f)
    I = grid.interior
    opn = (np.abs(fz.values) + np.abs(fzb.values))[I]
    collars = []
    for d in deltas:
        band = (dist > d / 2) & (dist <= d)
        if np.any(band):
            collars.append((float(d), float(np.max(opn[band])), int(band.sum())))
    if len(collars) < 3:
        raise ResolutionError(f"only {len(collars)} populated collars; refine the grid")
    sups = np.array([c[1] for c in collars])
    last = sups[-3:]
    spread = float((last.max() - last.min()) / max(last.max(), 1e-300))
    ds = np.array([c[0] for c in collars])
    half = max(3, len(collars) // 2)
    slope = float(np.polyfit(np.log(ds[-half:]), np.log(np.maximum(sups[-half:], 1e-300)), 1)[0])
    verdict = "plateau" if spread < PLATEAU_SPREAD else "growth"
    # difference quotients between interior nodes and their boundary crossings
    st = grid.stencil
    ext = f.extended()
    pos = {int(k): i for i, k in enumerate(st["index"])}
    rows = np.array([pos[int(k)] for k in grid.link_node], dtype=np.int64)
    arms = st["arm"][grid.link_dir, rows]
    diff = ext[grid.link_node] - f.trace
    if diff.ndim > 1:
        diff = np.linalg.norm(diff, axis=1)
    lip = float(np.max(np.abs(diff) / arms)) if grid.n_links else 0.0
    return CollarProfile(collars, lip, verdict, slope if verdict == "growth" else 0.0, spread)


@dataclass
class BilipschitzReport:
    """Per collar, the infimum of ``|f_z| - |f_zbar|`` (lower distortion)."""

    collars: list
    floor: float
    positive: bool

    def as_dict(self):
        return {"collars": [list(c) for c in self.collars], "floor": self.floor,
                "positive": self.positive}


def bilipschitz_probe(f: ComplexField, n_collars=None, delta0=None):
    """Exploratory: does ``|f_z| - |f_zbar|`` stay away from zero towards the boundary?"""
    grid = f.grid
    dist, deltas = _collar_bands(grid, n_collars, delta0)
    fz, fzb = wirtinger_derivatives(f)
    I = grid.interior
    low = (np.abs(fz.values) - np.abs(fzb.values))[I]
    scale = float(np.sqrt(np.mean(2 * (np.abs(fz.values[I])**2 + np.abs(fzb.values[I])**2))))
    collars = []
    for d in deltas:
        band = (dist > d / 2) & (dist <= d)
        if np.any(band):
            collars.append((float(d), float(np.min(low[band]))))
    inner = dist > deltas[0]
    if np.any(inner):
        collars.insert(0, (float(np.max(dist)), float(np.min(low[inner]))))
    floor = min(c[1] for c in collars) if collars else float(np.min(low))
    return BilipschitzReport(collars, float(floor), bool(floor > DEGENERACY_FLOOR * scale))
