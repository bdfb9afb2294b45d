"""Masked structured grids with finite-difference Wirtinger calculus.

A :class:`DiskGrid` overlays a square lattice on a planar Jordan domain.
Nodes strictly inside the boundary curve are *interior*; non-interior nodes
4-adjacent to an interior node are *boundary* nodes.  Wherever a grid line
leaves the domain between an interior node and its neighbour, the exact
crossing with the curve is stored as a *link*.  Fields carry their values at
the links (the boundary trace), which lets the Laplacian use the
Shortley-Weller stencil: still exact on quadratics, and second-order
accurate for Dirichlet problems on curved boundaries.

Convention: ``values[i, j]`` lives at ``x_j + i y_i``; row index ``i`` runs
along ``y``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.ndimage import label
from scipy.spatial import cKDTree

from .domains import TWO_PI, PlanarDomain, disk
from .errors import GridError, ParameterError

EXTERIOR, BOUNDARY, INTERIOR = 0, 1, 2
EAST, WEST, NORTH, SOUTH = 0, 1, 2, 3
MIN_NODES = 33
SUBROWS = 16


def _level_crossings(a, b, level0, dlevel, nlevels):
    """Crossings of polyline segments ``a -> b`` (1-D coordinate) with levels.

    Uses the half-open rule ``(a > y) != (b > y)`` so that every closed
    curve crosses each level an even number of times.  Returns the level
    index, segment index and the linear fraction along the segment.
    """
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    first = np.ceil((lo - level0) / dlevel).astype(np.int64) - 1
    last = np.floor((hi - level0) / dlevel).astype(np.int64) + 1
    first = np.clip(first, 0, nlevels - 1)
    last = np.clip(last, -1, nlevels - 1)
    count = np.maximum(last - first + 1, 0)
    seg = np.repeat(np.arange(a.size), count)
    offs = np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count)
    lev = first[seg] + offs
    y = level0 + lev * dlevel
    keep = (a[seg] > y) != (b[seg] > y)
    seg, lev, y = seg[keep], lev[keep], y[keep]
    frac = (y - a[seg]) / (b[seg] - a[seg])
    return lev, seg, frac


def _interval_overlap(starts, ends, lefts, width):
    """Length of ``[left, left + width]`` covered by the union of intervals."""
    total = np.zeros(lefts.shape)
    for s, e in zip(starts, ends):
        total += np.clip(np.minimum(e, lefts + width) - np.maximum(s, lefts), 0.0, None)
    return total


class DiskGrid:
    """Square lattice masked to a planar Jordan domain.

    Parameters
    ----------
    domain : PlanarDomain, optional
        Domain to discretize; defaults to the unit disk.
    n : int
        Nodes per axis, at least 33.  The lattice spans the bounding box of
        the domain, so ``h = extent / (n - 1)``.

    Attributes
    ----------
    x, y : ndarray
        Lattice coordinates along each axis.
    z : ndarray
        Complex node coordinates, shape ``(n, n)``.
    mask : ndarray of int8
        ``INTERIOR``, ``BOUNDARY`` or ``EXTERIOR`` per node.
    link_node, link_dir, link_frac, link_t, link_z : ndarray
        One entry per boundary crossing: the interior node it belongs to, the
        direction (E, W, N, S), the arm length as a fraction of ``h``, the
        curve parameter and the crossing point.
    boundary_t, boundary_z : ndarray
        Curve parameter and nearest curve point of each boundary node, in
        row-major order of ``np.flatnonzero(mask == BOUNDARY)``.
    """

    def __init__(self, domain: Optional[PlanarDomain] = None, n: int = 65):
        if n < MIN_NODES:
            raise ParameterError(f"grid resolution floor is n >= {MIN_NODES}, got {n}")
        self.domain = domain if domain is not None else disk()
        self.n = int(n)
        x0, x1, y0, y1 = self.domain.bounding_box()
        extent = max(x1 - x0, y1 - y0)
        if not extent > 0:
            raise GridError("degenerate domain bounding box")
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        self.h = extent / (self.n - 1)
        self.x = cx - 0.5 * extent + self.h * np.arange(self.n)
        self.y = cy - 0.5 * extent + self.h * np.arange(self.n)
        self.z = self.x[None, :] + 1j * self.y[:, None]

        m = max(64 * self.n, 4096)
        self.poly_t, self.poly_z = self.domain.sample(m)
        seg_len = np.abs(np.roll(self.poly_z, -1) - self.poly_z)
        self.boundary_s = np.concatenate([[0.0], np.cumsum(seg_len)[:-1]])
        self._build_mask_and_links()
        self._build_boundary_nodes()

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    def _refine(self, seg, target, axis):
        """Bisection on the exact curve for ``Re/Im point(t) == target``."""
        m = self.poly_t.size
        dt = TWO_PI / m
        lo = self.poly_t[seg].copy()
        hi = lo + dt
        comp = (lambda w: w.real) if axis == 0 else (lambda w: w.imag)
        flo = comp(self.domain.point(lo)) - target
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = comp(self.domain.point(mid)) - target
            left = np.sign(fm) == np.sign(flo)
            lo = np.where(left, mid, lo)
            flo = np.where(left, fm, flo)
            hi = np.where(left, hi, mid)
        t = 0.5 * (lo + hi)
        return np.mod(t, TWO_PI), self.domain.point(t)

    def _axis_crossings(self, axis):
        """Exact crossings of every lattice row (axis=1) or column (axis=0)."""
        a = self.poly_z
        b = np.roll(a, -1)
        if axis == 1:
            lev, seg, _ = _level_crossings(a.imag, b.imag, self.y[0], self.h, self.n)
            t, w = self._refine(seg, self.y[lev], axis=1)
            pos = w.real
        else:
            lev, seg, _ = _level_crossings(a.real, b.real, self.x[0], self.h, self.n)
            t, w = self._refine(seg, self.x[lev], axis=0)
            pos = w.imag
        out = []
        for k in range(self.n):
            sel = lev == k
            order = np.argsort(pos[sel])
            out.append((pos[sel][order], t[sel][order], w[sel][order]))
        return out

    def _build_mask_and_links(self):
        n, h = self.n, self.h
        tol = 1e-12 * h * n
        rows = self._axis_crossings(axis=1)
        cols = self._axis_crossings(axis=0)
        inside_r = np.zeros((n, n), dtype=bool)
        for i, (xc, _, _) in enumerate(rows):
            cnt = np.searchsorted(xc, self.x, side="right")
            near = np.zeros(n, dtype=bool)
            if xc.size:
                k = np.clip(np.searchsorted(xc, self.x), 0, xc.size - 1)
                k0 = np.clip(k - 1, 0, xc.size - 1)
                near = (np.abs(xc[k] - self.x) <= tol) | (np.abs(xc[k0] - self.x) <= tol)
            inside_r[i] = (cnt % 2 == 1) & ~near
        inside_c = np.zeros((n, n), dtype=bool)
        for j, (yc, _, _) in enumerate(cols):
            cnt = np.searchsorted(yc, self.y, side="right")
            near = np.zeros(n, dtype=bool)
            if yc.size:
                k = np.clip(np.searchsorted(yc, self.y), 0, yc.size - 1)
                k0 = np.clip(k - 1, 0, yc.size - 1)
                near = (np.abs(yc[k] - self.y) <= tol) | (np.abs(yc[k0] - self.y) <= tol)
            inside_c[:, j] = (cnt % 2 == 1) & ~near
        interior = inside_r & inside_c
        # drop isolated specks so that the interior is 4-connected

        lab, nlab = label(interior)
        if nlab == 0:
            raise GridError("grid has no interior nodes; increase n")
        if nlab > 1:
            sizes = np.bincount(lab.ravel())[1:]
            interior = lab == (1 + int(np.argmax(sizes)))

        node_nb = {d: np.full((n, n), -1, dtype=np.int64) for d in (EAST, WEST, NORTH, SOUTH)}
        links = {"node": [], "dir": [], "frac": [], "t": [], "z": []}
        idx = np.arange(n * n).reshape(n, n)
        for d in (EAST, WEST, NORTH, SOUTH):
            horizontal = d in (EAST, WEST)
            sgn = 1 if d in (EAST, NORTH) else -1
            for line in range(n):
                pos, ts, ws = rows[line] if horizontal else cols[line]
                along = np.flatnonzero(interior[line] if horizontal else interior[:, line])
                if along.size == 0:
                    continue
                c = (self.x if horizontal else self.y)[along]
                if sgn > 0:
                    k = np.searchsorted(pos, c, side="right")
                    valid = k < pos.size
                    k = np.minimum(k, pos.size - 1)
                    hit = valid & (pos[k] <= c + h + tol) if pos.size else np.zeros(c.size, bool)
                else:
                    k = np.searchsorted(pos, c, side="left") - 1
                    valid = k >= 0
                    k = np.maximum(k, 0)
                    hit = valid & (pos[k] >= c - h - tol) if pos.size else np.zeros(c.size, bool)
                nxt = along + sgn
                inb = (nxt >= 0) & (nxt < n)
                nxt_c = np.clip(nxt, 0, n - 1)
                if horizontal:
                    nb_inside = inb & interior[line, nxt_c]
                    me, other = idx[line, along], idx[line, nxt_c]
                else:
                    nb_inside = inb & interior[nxt_c, line]
                    me, other = idx[along, line], idx[nxt_c, line]
                dist = np.abs(pos[k] - c) if pos.size else np.full(c.size, np.inf)
                is_node = nb_inside & ~(hit & (dist < h - tol))
                node_nb[d].ravel()[me[is_node]] = other[is_node]
                lk = ~is_node
                if np.any(lk & ~hit):
                    raise GridError(f"missing boundary crossing on grid line {line}")
                links["node"].append(me[lk])
                links["dir"].append(np.full(lk.sum(), d))
                links["frac"].append(np.minimum(dist[lk] / h, 1.0))
                links["t"].append(ts[k[lk]])
                links["z"].append(ws[k[lk]])
        links = {key: np.concatenate(v) if v else np.zeros(0) for key, v in links.items()}
        self.link_node = np.asarray(links["node"], dtype=np.int64)
        self.link_dir = np.asarray(links["dir"], dtype=np.int64)
        self.link_frac = np.asarray(links["frac"], dtype=float)
        self.link_t = np.asarray(links["t"], dtype=float)
        self.link_z = np.asarray(links["z"], dtype=complex)
        if np.any(self.link_frac <= 0):
            raise GridError("boundary crossing coincides with an interior node")
        self._node_nb = node_nb

        boundary = np.zeros((n, n), dtype=bool)
        boundary[:, :-1] |= interior[:, 1:]
        boundary[:, 1:] |= interior[:, :-1]
        boundary[:-1, :] |= interior[1:, :]
        boundary[1:, :] |= interior[:-1, :]
        boundary &= ~interior
        self.mask = np.full((n, n), EXTERIOR, dtype=np.int8)
        self.mask[boundary] = BOUNDARY
        self.mask[interior] = INTERIOR

    def _build_boundary_nodes(self):
        zb = self.z[self.mask == BOUNDARY]
        self.boundary_t, self.boundary_z, _ = self.project(zb)

    # ------------------------------------------------------------------
    # geometry helpers
    # ------------------------------------------------------------------
    @cached_property
    def _tree(self):
        return cKDTree(np.column_stack([self.poly_z.real, self.poly_z.imag]))

    def project(self, points):
        """Nearest point on the boundary curve.

        Dense polyline lookup followed by Newton steps on
        ``Re(conj(point(t) - p) * tangent(t)) = 0``.

        Returns
        -------
        t, zc, dist : ndarray
            Curve parameter, curve point and Euclidean distance.
        """
        p = np.asarray(points, dtype=complex).ravel()
        if p.size == 0:
            return np.zeros(0), np.zeros(0, dtype=complex), np.zeros(0)
        _, k = self._tree.query(np.column_stack([p.real, p.imag]))
        dt = TWO_PI / self.poly_t.size
        t0 = self.poly_t[k]
        t = t0.copy()
        dom = self.domain
        for _ in range(8):
            g, g1, g2 = dom.point(t), dom.tangent(t), dom.second(t)
            r = g - p
            phi = (np.conj(r) * g1).real
            dphi = np.abs(g1)**2 + (np.conj(r) * g2).real
            step = np.where(dphi > 0, phi / np.where(dphi > 0, dphi, 1.0), 0.0)
            t = np.clip(t - step, t0 - dt, t0 + dt)
        zc = dom.point(t)
        return np.mod(t, TWO_PI), zc, np.abs(zc - p)

    @cached_property
    def interior(self):
        return self.mask == INTERIOR

    @cached_property
    def boundary(self):
        return self.mask == BOUNDARY

    @cached_property
    def interior_index(self):
        """Flat indices of interior nodes, row-major."""
        return np.flatnonzero(self.mask.ravel() == INTERIOR)

    @cached_property
    def boundary_index(self):
        return np.flatnonzero(self.mask.ravel() == BOUNDARY)

    @property
    def n_links(self):
        return self.link_node.size

    @cached_property
    def distance(self):
        """Distance to the boundary curve per node (NaN on exterior nodes)."""
        d = np.full((self.n, self.n), np.nan)
        sel = self.mask != EXTERIOR
        _, _, dist = self.project(self.z[sel])
        d[sel] = dist
        return d

    @cached_property
    def regular(self):
        """Interior nodes whose whole five-point stencil is interior."""
        reg = np.zeros(self.n * self.n, dtype=bool)
        I = self.interior_index
        ok = np.ones(I.size, dtype=bool)
        for d in (EAST, WEST, NORTH, SOUTH):
            ok &= self._node_nb[d].ravel()[I] >= 0
        reg[I[ok]] = True
        return reg.reshape(self.n, self.n)

    @cached_property
    def sample_points(self):
        """Interior nodes plus every boundary crossing: the closed-domain sample set."""
        return np.concatenate([self.z[self.interior], self.link_z])

    @cached_property
    def weights(self):
        """Quadrature weight per node, ``h**2`` times the inside fraction of its cell.

        Fractions are exact along each of ``SUBROWS`` sub-rows per cell row;
        weight falling on non-interior cells is moved to the nearest interior
        node so that the interior weights sum to the domain area.
        """
        n, h = self.n, self.h
        frac = np.zeros((n, n))
        a, b = self.poly_z, np.roll(self.poly_z, -1)
        dy = h / SUBROWS
        y0 = self.y[0] - 0.5 * h + 0.5 * dy
        lev, seg, f = _level_crossings(a.imag, b.imag, y0, dy, n * SUBROWS)
        xc = a.real[seg] + f * (b.real[seg] - a.real[seg])
        order = np.lexsort((xc, lev))
        lev, xc = lev[order], xc[order]
        lefts = self.x - 0.5 * h
        bounds = np.searchsorted(lev, np.arange(n * SUBROWS + 1))
        for s in range(n * SUBROWS):
            xs = xc[bounds[s]:bounds[s + 1]]
            if xs.size < 2:
                continue
            frac[s // SUBROWS] += _interval_overlap(xs[0::2], xs[1::2], lefts, h) / h
        frac /= SUBROWS
        w = frac * h * h
        inner = self.interior
        stray = (~inner) & (w > 0)
        if np.any(stray):
            tree = cKDTree(np.column_stack([self.z[inner].real, self.z[inner].imag]))
            _, k = tree.query(np.column_stack([self.z[stray].real, self.z[stray].imag]))
            flat_inner = np.flatnonzero(inner.ravel())
            wf = w.ravel()
            np.add.at(wf, flat_inner[k], wf[np.flatnonzero(stray.ravel())])
            wf[np.flatnonzero(stray.ravel())] = 0.0
            w = wf.reshape(n, n)
        w[~inner] = 0.0
        return w

    # ------------------------------------------------------------------
    # stencil tables
    # ------------------------------------------------------------------
    @cached_property
    def stencil(self):
        """Neighbour lookup tables over interior nodes.

        Indices point into the *extended* vector ``[values.ravel(), trace]``;
        ``-1`` marks an unavailable neighbour.  ``arm`` holds the distance to
        the E, W, N, S neighbour (``h`` or the crossing distance).
        """
        n, N = self.n, self.n * self.n
        I = self.interior_index
        pos = {int(k): i for i, k in enumerate(I)}
        near = np.empty((4, I.size), dtype=np.int64)
        far = np.full((4, I.size), -1, dtype=np.int64)
        arm = np.full((4, I.size), self.h)
        for d in (EAST, WEST, NORTH, SOUTH):
            nb = self._node_nb[d].ravel()
            near[d] = nb[I]
        for k, (node, d, fr) in enumerate(zip(self.link_node, self.link_dir, self.link_frac)):
            i = pos[int(node)]
            near[d, i] = N + k
            arm[d, i] = fr * self.h
        for d in (EAST, WEST, NORTH, SOUTH):
            nb = self._node_nb[d].ravel()
            ok = (near[d] >= 0) & (near[d] < N)
            second = np.full(I.size, -1, dtype=np.int64)
            second[ok] = nb[near[d][ok]]
            far[d] = second
        return {"index": I, "near": near, "far": far, "arm": arm}


# ----------------------------------------------------------------------
# fields
# ----------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ComplexField:
    """Map sampled on a :class:`DiskGrid`.

    ``values`` has shape ``(n, n)`` (complex or real scalar) or ``(n, n, l)``
    for an ``R^l``-valued map.  ``trace`` holds the values at the grid's
    boundary crossings.  Outside the support ``values`` is NaN.
    ``support`` is ``"closed"`` (interior, boundary nodes and trace) or
    ``"interior"`` (derived quantities such as derivatives).  ``func``, when
    present, evaluates the underlying map at arbitrary points.
    """

    grid: DiskGrid
    values: np.ndarray
    trace: np.ndarray
    func: Optional[Callable] = None
    support: str = "closed"

    def __post_init__(self):
        n = self.grid.n
        if self.values.shape[:2] != (n, n):
            raise GridError("values do not match the grid shape")
        if self.trace.shape[0] != self.grid.n_links:
            raise GridError("trace does not match the grid's boundary crossings")
        sel = self.grid.interior if self.support == "interior" else self.grid.mask != EXTERIOR
        if not np.all(np.isfinite(self.values[sel])):
            raise GridError("field values must be finite on the support")

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func`` (complex points -> values) on a grid.

        Boundary nodes receive the value at their nearest curve point; the
        trace is sampled at the exact crossings.
        """
        zi = grid.z[grid.interior]
        vi = np.asarray(func(zi))
        tail = vi.shape[1:]
        dtype = np.result_type(vi.dtype, float)
        values = np.full((grid.n, grid.n) + tail, np.nan, dtype=dtype)
        values[grid.interior] = vi
        values[grid.boundary] = np.asarray(func(grid.boundary_z))
        trace = np.asarray(func(grid.link_z)).astype(dtype).reshape((grid.n_links,) + tail)
        return cls(grid, values, trace, func=func)

    @classmethod
    def from_boundary(cls, grid, interior_values, boundary):
        """Assemble a field from interior values and boundary data over the curve parameter."""
        vi = np.asarray(interior_values)
        tail = vi.shape[1:]
        vb = np.asarray(boundary(grid.boundary_t))
        vt = np.asarray(boundary(grid.link_t))
        dtype = np.result_type(vi.dtype, vb.dtype, float)
        values = np.full((grid.n, grid.n) + tail, np.nan, dtype=dtype)
        values[grid.interior] = vi
        values[grid.boundary] = vb
        return cls(grid, values, vt.astype(dtype).reshape((grid.n_links,) + tail))

    @property
    def is_vector(self):
        return self.values.ndim == 3

    def extended(self):
        """Flat ``[values, trace]`` vector addressed by ``grid.stencil`` indices."""
        tail = self.values.shape[2:]
        return np.concatenate([self.values.reshape((-1,) + tail), self.trace], axis=0)

    def interior_values(self):
        return self.values[self.grid.interior]

    def _check(self, other):
        if isinstance(other, ComplexField) and other.grid is not self.grid:
            raise GridError("operands live on different grids")

    def _combine(self, other, op):
        self._check(other)
        if isinstance(other, ComplexField):
            func = None
            if self.func is not None and other.func is not None:
                f, g = self.func, other.func
                func = lambda z: op(np.asarray(f(z)), np.asarray(g(z)))
            support = "interior" if "interior" in (self.support, other.support) else "closed"
            return ComplexField(self.grid, op(self.values, other.values),
                                op(self.trace, other.trace), func, support)
        func = None
        if self.func is not None:
            f = self.func
            func = lambda z: op(np.asarray(f(z)), other)
        return ComplexField(self.grid, op(self.values, other), op(self.trace, other),
                            func, self.support)

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def apply(self, phi):
        """Post-compose with a pointwise map: returns ``phi o f``."""
        func = None
        if self.func is not None:
            f = self.func
            func = lambda z: phi(f(z))
        values = self.values.copy()
        sel = ~np.isnan(values) if values.ndim == 2 else ~np.isnan(values[..., 0])
        out = np.asarray(phi(values[sel]))
        values = np.full(values.shape[:2] + out.shape[1:], np.nan, dtype=np.result_type(out, float))
        values[sel] = out
        return ComplexField(self.grid, values, np.asarray(phi(self.trace)), func, self.support)

    @property
    def real(self):
        f = self.func
        return ComplexField(self.grid, np.real(self.values).astype(float),
                            np.real(self.trace).astype(float),
                            None if f is None else (lambda z: np.real(f(z))), self.support)

    @property
    def imag(self):
        f = self.func
        return ComplexField(self.grid, np.imag(self.values).astype(float),
                            np.imag(self.trace).astype(float),
                            None if f is None else (lambda z: np.imag(f(z))), self.support)

    def to_csv(self, path):
        write_csv(self, path)


def _interior_field(grid, vals):
    tail = vals.shape[1:]
    out = np.full((grid.n, grid.n) + tail, np.nan, dtype=np.result_type(vals.dtype, float))
    out[grid.interior] = vals
    trace = np.full((grid.n_links,) + tail, np.nan, dtype=out.dtype)
    return ComplexField(grid, out, trace, support="interior")


def _require_closed(f):
    if f.support != "closed":
        raise GridError("derivatives need values on the closed domain (boundary trace)")


def _first_derivative(ext, st, plus, minus):
    """Second-order first derivative along one axis at every interior node."""
    near, far, arm = st["near"], st["far"], st["arm"]
    n_nodes = st["n_nodes"]
    c = ext[st["index"]]
    ip, im = near[plus], near[minus]
    ipp, imm = far[plus], far[minus]
    a, b = -arm[minus], arm[plus]
    sh = (-1,) + (1,) * (ext.ndim - 1)
    fp, fm = ext[ip], ext[im]
    p_node, m_node = ip < n_nodes, im < n_nodes
    out = np.empty_like(c)

    central = p_node & m_node
    out[central] = (fp[central] - fm[central]) / (2 * b[central]).reshape(sh)
    back = ~p_node & m_node & (imm >= 0)
    out[back] = (3 * c[back] - 4 * fm[back] + ext[imm[back]]) / (-2 * a[back]).reshape(sh)
    fwd = p_node & ~m_node & (ipp >= 0)
    out[fwd] = (-3 * c[fwd] + 4 * fp[fwd] - ext[ipp[fwd]]) / (2 * b[fwd]).reshape(sh)

    rest = ~(central | back | fwd)
    if np.any(rest):
        ar, br = a[rest].reshape(sh), b[rest].reshape(sh)
        out[rest] = (br**2 * fm[rest] - (br**2 - ar**2) * c[rest] - ar**2 * fp[rest]) \
            / (ar * br * (br - ar))
    return out


def _stencil(grid):
    st = dict(grid.stencil)
    st["n_nodes"] = grid.n * grid.n
    return st


def partial_derivatives(f: ComplexField):
    """Return ``(f_x, f_y)`` at interior nodes.

    Central differences where both neighbours are interior nodes; one-sided
    second-order stencils built from interior nodes next to the boundary;
    a three-point non-uniform stencil through the boundary crossing when
    neither is available.
    """
    _require_closed(f)
    grid = f.grid
    st = _stencil(grid)
    ext = f.extended()
    fx = _first_derivative(ext, st, EAST, WEST)
    fy = _first_derivative(ext, st, NORTH, SOUTH)
    return _interior_field(grid, fx), _interior_field(grid, fy)


def wirtinger_derivatives(f: ComplexField):
    """Return ``(f_z, f_zbar) = ((f_x - i f_y)/2, (f_x + i f_y)/2)``."""
    if f.is_vector:
        raise GridError("Wirtinger derivatives need a scalar (complex or real) field")
    fx, fy = partial_derivatives(f)
    fz = 0.5 * (fx.values - 1j * fy.values)
    fzb = 0.5 * (fx.values + 1j * fy.values)
    g = f.grid
    nan = np.full(g.n_links, np.nan, dtype=complex)
    return (ComplexField(g, fz, nan, support="interior"),
            ComplexField(g, fzb, nan.copy(), support="interior"))


def laplacian(f: ComplexField):
    """Five-point Laplacian with Shortley-Weller arms at boundary crossings.

    On the regular lattice this is ``(f_E + f_W + f_N + f_S - 4 f_C) / h**2``.
    Where an arm ends on the boundary curve the crossing value and its true
    distance are used, which keeps the stencil exact on quadratics.
    """
    _require_closed(f)
    grid = f.grid
    st = grid.stencil
    ext = f.extended()
    near, arm = st["near"], st["arm"]
    c = ext[st["index"]]
    tail = (slice(None),) + (None,) * (ext.ndim - 1)
    total = np.zeros_like(c)
    for plus, minus in ((EAST, WEST), (NORTH, SOUTH)):
        a, b = -arm[minus][tail], arm[plus][tail]
        total = total + 2 * ((ext[near[minus]] - c) / (a * (a - b)) + (ext[near[plus]] - c) / (b * (b - a)))
    return _interior_field(grid, total)


def laplacian_weights(grid):
    """Per interior node: diagonal weight and the four arm weights of :func:`laplacian`."""
    st = grid.stencil
    arm = st["arm"]
    w = np.zeros((4, arm.shape[1]))
    for plus, minus in ((EAST, WEST), (NORTH, SOUTH)):
        a, b = -arm[minus], arm[plus]
        w[minus] = 2 / (a * (a - b))
        w[plus] = 2 / (b * (b - a))
    return -w.sum(axis=0), w


def gradient_norm_sq(f: ComplexField):
    """Hilbert-Schmidt ``|grad f|^2 = |f_x|^2 + |f_y|^2 = 2(|f_z|^2 + |f_zbar|^2)``."""
    fx, fy = partial_derivatives(f)
    v = np.abs(fx.values)**2 + np.abs(fy.values)**2
    if v.ndim == 3:
        v = v.sum(axis=2)
    return _interior_field(f.grid, v[f.grid.interior])


def operator_norm(f: ComplexField):
    """Operator norm of the differential, ``|f_z| + |f_zbar|``."""
    fz, fzb = wirtinger_derivatives(f)
    return _interior_field(f.grid, (np.abs(fz.values) + np.abs(fzb.values))[f.grid.interior])


def dirichlet_energy(f: ComplexField):
    """Quadrature of ``|f_x|^2 + |f_y|^2`` with the grid's cell-fraction weights."""
    grid = f.grid
    if not np.any(grid.interior):
        raise GridError("empty interior")
    g2 = gradient_norm_sq(f).values[grid.interior]
    w = grid.weights[grid.interior]
    return float(np.dot(w, g2))


def write_csv(f: ComplexField, path):
    """One row per non-exterior node; boundary rows sit at their curve point."""
    grid = f.grid
    pts = np.concatenate([grid.z[grid.interior], grid.boundary_z]) if f.support == "closed" \
        else grid.z[grid.interior]
    vals = f.values[grid.interior]
    if f.support == "closed":
        vals = np.concatenate([vals, f.values[grid.boundary]])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if vals.ndim == 2:
            w.writerow(["x", "y"] + [f"c{k}" for k in range(vals.shape[1])])
            for p, v in zip(pts, vals):
                w.writerow([repr(float(p.real)), repr(float(p.imag))] + [repr(float(c)) for c in v])
        else:
            w.writerow(["x", "y", "re", "im"])
            for p, v in zip(pts, vals):
                w.writerow([repr(float(p.real)), repr(float(p.imag)),
                            repr(float(np.real(v))), repr(float(np.imag(v)))])
