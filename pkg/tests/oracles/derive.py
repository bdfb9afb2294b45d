"""Derive the reference values used by the test-suite, independently of qclab.

Everything here is computed with sympy (exact arithmetic, symbolic calculus
and integration).  Running the module rewrites ``frozen.json``;
``tests/test_oracles.py`` re-derives the values and checks that the frozen
file is still in sync.

    python tests/oracles/derive.py
"""
from __future__ import annotations

import json
from pathlib import Path

import sympy as sp

FROZEN = Path(__file__).with_name("frozen.json")

u, v, x, y, r, t = sp.symbols("u v x y r t", real=True)
w = u + sp.I * v


def _c(expr):
    val = complex(sp.N(expr, 30))
    return [val.real, val.imag]


def _f(expr):
    return float(sp.N(expr, 30))


def wirtinger(expr):
    """Return (d/dz, d/dzbar) of an expression in x, y."""
    return (sp.diff(expr, x) - sp.I * sp.diff(expr, y)) / 2, (sp.diff(expr, x) + sp.I * sp.diff(expr, y)) / 2


def field_oracles():
    z = x + sp.I * y
    fz, _ = wirtinger(z**2)
    at = {x: sp.Rational(3, 10), y: sp.Rational(1, 10)}
    aff = z + sp.Rational(3, 10) * sp.conjugate(z)
    az, azb = wirtinger(aff)
    grad_aff = sp.simplify(2 * (sp.Abs(az)**2 + sp.Abs(azb)**2))
    # energy of z^2 on the unit disk: integrand |f_x|^2 + |f_y|^2 = 8 r^2 in polar form
    fx, fy = sp.diff(z**2, x), sp.diff(z**2, y)
    dens = sp.simplify(sp.expand(fx * sp.conjugate(fx) + fy * sp.conjugate(fy)))
    dens_polar = sp.simplify(dens.subs({x: r * sp.cos(t), y: r * sp.sin(t)}))
    energy = sp.integrate(sp.integrate(dens_polar * r, (r, 0, 1)), (t, 0, 2 * sp.pi))
    lap_exp = sp.simplify(sp.diff(sp.exp(x) * sp.cos(y), x, 2) + sp.diff(sp.exp(x) * sp.cos(y), y, 2))
    return {
        "z2_fz_at_03_01": _c(fz.subs(at)),
        "affine_03_gradient_norm_sq": _f(grad_aff),
        "z2_energy_unit_disk": _f(energy),
        "z_energy_unit_disk": _f(2 * sp.pi),
        "exp_cos_laplacian": _f(lap_exp),
    }


def sphere(radius=1):
    d = 1 + u**2 + v**2
    return sp.Matrix([2 * u, 2 * v, u**2 + v**2 - 1]) * radius / d


def surface_oracles():
    X = sphere()
    Xu, Xv = X.diff(u), X.diff(v)
    E = sp.simplify(Xu.dot(Xu))
    F = sp.simplify(Xu.dot(Xv))
    G = sp.simplify(Xv.dot(Xv))
    rho = E
    log_rho_w = sp.simplify((sp.diff(sp.log(rho), u) - sp.I * sp.diff(sp.log(rho), v)) / 2)
    expected_lrw = -2 * (u - sp.I * v) / (1 + u**2 + v**2)
    graph = sp.Matrix([u, v, u**2 + v**2])
    gu, gv = graph.diff(u), graph.diff(v)
    ge, gf, gg = gu.dot(gu), gu.dot(gv), gv.dot(gv)
    at = {u: sp.Rational(1, 2), v: 0}
    # |X_u| = 2 / (1 + r^2) on the closed unit disk: minimum at r = 1
    c_min = sp.minimum(2 / (1 + r**2), r, sp.Interval(0, 1))
    # sup |(log rho)_w| = sup 2 r / (1 + r^2) on [0, 1]
    m_prime = sp.maximum(2 * r / (1 + r**2), r, sp.Interval(0, 1))
    # weighted energy of the identity into the sphere factor: int rho * 2
    rho_polar = sp.simplify(rho.subs({u: r * sp.cos(t), v: r * sp.sin(t)}))
    energy = sp.integrate(sp.integrate(2 * rho_polar * r, (r, 0, 1)), (t, 0, 2 * sp.pi))
    samples = [(sp.Rational(1, 5), sp.Rational(-2, 5)), (sp.Rational(-7, 10), sp.Rational(1, 10)),
               (sp.Rational(3, 10), sp.Rational(3, 5))]
    return {
        "sphere_metric_E_minus_target": _f(sp.simplify(E - 4 / (1 + u**2 + v**2)**2)),
        "sphere_metric_F": _f(F),
        "sphere_metric_G_minus_E": _f(sp.simplify(G - E)),
        "sphere_log_rho_w_identity": _f(sp.simplify(sp.expand(log_rho_w - expected_lrw))),
        "sphere_samples": [
            {"w": [_f(a), _f(b)], "rho": _f(rho.subs({u: a, v: b})),
             "log_rho_w": _c(log_rho_w.subs({u: a, v: b})),
             "X_uu": [_f(c) for c in X.diff(u, 2).subs({u: a, v: b})],
             "X_uv": [_f(c) for c in X.diff(u, v).subs({u: a, v: b})]}
            for a, b in samples],
        "graph_metric_at_05_0": [_f(ge.subs(at)), _f(gf.subs(at)), _f(gg.subs(at))],
        "graph_conformality_at_05_0": _f(sp.Abs(ge - gg).subs(at) + sp.Abs(gf).subs(at)),
        "sphere_c": _f(c_min),
        "sphere_M_prime": _f(m_prime),
        "sphere_weighted_energy_identity": _f(energy),
    }


def plane_oracles():
    zz = sp.symbols("z")
    a = sp.Rational(1, 2)
    mob = (zz - a) / (1 - a * zz)
    d = sp.diff(mob, zz)
    on_circle = sp.Abs(d.subs(zz, sp.exp(sp.I * t)))
    lo = sp.minimum(sp.simplify(on_circle**2), t, sp.Interval(0, 2 * sp.pi))
    hi = sp.maximum(sp.simplify(on_circle**2), t, sp.Interval(0, 2 * sp.pi))
    return {
        "mobius_05_value_at_0": _c(mob.subs(zz, 0)),
        "mobius_05_derivative_at_0": _c(d.subs(zz, 0)),
        "mobius_05_abs_derivative_range": [_f(sp.sqrt(lo)), _f(sp.sqrt(hi))],
    }


def diagnostics_oracles():
    z = x + sp.I * y
    nu = sp.Rational(3, 10)
    aff = z + nu * sp.conjugate(z)
    U, V = sp.re(sp.expand(aff)), sp.im(sp.expand(aff))
    A = sp.diff(U, x)**2 + sp.diff(U, y)**2
    B = sp.diff(V, x)**2 + sp.diff(V, y)**2
    s = V
    s_z = (sp.diff(s, x) - sp.I * sp.diff(s, y)) / 2
    q = x**2 + y**2
    lap_q = sp.diff(q, x, 2) + sp.diff(q, y, 2)
    grad_q = sp.diff(q, x)**2 + sp.diff(q, y)**2
    return {
        "affine_03_A_over_B": _f(sp.simplify(A / B)),
        "affine_03_sandwich_upper": _f((1 + nu)**2 / (1 - nu)**2),
        "affine_03_abs_s_z": _f(sp.Abs(s_z)),
        "abs_z2_N_at_M0": _f(sp.Max(lap_q)),
        "abs_z2_N_at_M1": _f((lap_q - grad_q).subs({x: 0, y: 0})),
    }


def elliptic_oracles():
    """M and N from the displayed closed forms, for fixed rational coefficient sets.

    The reduction uses the symmetric square root ``P`` of the principal matrix
    ``A = [[alpha, beta], [beta, gamma]]`` (closed form
    ``(A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A))``) and ``q = P^-1``.
    Lower-order coefficients are constants; the primed ones follow from the
    chain rule ``w_x = q11 w_u + q21 w_v``, ``w_y = q12 w_u + q22 w_v``.
    """
    import random

    rnd = random.Random(20240611)
    out = []
    for _ in range(10):
        al = sp.Rational(rnd.randint(5, 40), 10)
        ga = sp.Rational(rnd.randint(5, 40), 10)
        lim = int(9 * sp.sqrt(al * ga))
        be = sp.Rational(rnd.randint(-lim, lim), 10) * sp.Rational(1, 1)
        be = be if be**2 < al * ga else sp.Rational(0)
        coef = {k: sp.Rational(rnd.randint(-20, 20), 10)
                for k in ("a1", "b1", "c1", "a", "b", "c", "d")}
        w_sup = sp.Rational(rnd.randint(0, 20), 10)
        Am = sp.Matrix([[al, be], [be, ga]])
        sd = sp.sqrt(Am.det())
        P = (Am + sd * sp.eye(2)) / sp.sqrt(Am.trace() + 2 * sd)
        Q = P.inv()
        wu, wv = sp.symbols("w_u w_v")
        wx = Q[0, 0] * wu + Q[1, 0] * wv
        wy = Q[0, 1] * wu + Q[1, 1] * wv
        quad = sp.expand(coef["a1"] * wx**2 + coef["b1"] * wx * wy + coef["c1"] * wy**2)
        lin = sp.expand(coef["a"] * wx + coef["b"] * wy)
        a1p = quad.coeff(wu, 2).subs(wv, 0)
        c1p = quad.coeff(wv, 2).subs(wu, 0)
        b1p = quad.coeff(wu, 1).coeff(wv, 1)
        ap, bp = lin.coeff(wu), lin.coeff(wv)
        M = (abs(ap) + abs(bp)) / 2 + sp.Max(abs(a1p), abs(c1p)) + abs(b1p) / 2
        N = (abs(ap) + abs(bp)) / 2 + abs(coef["c"]) * w_sup + abs(coef["d"])
        out.append({"alpha": _f(al), "beta": _f(be), "gamma": _f(ga),
                    **{k: _f(val) for k, val in coef.items()}, "w_sup": _f(w_sup),
                    "M": _f(M), "N": _f(N)})
    # the diag(4, 1) example: u = x / 2, so w = x^2 = 4 u^2 and w_uu = 8 = 4 w_xx
    uu = sp.symbols("uu")
    return {"random_sets": out,
            "diag_4_1_substitution": [[0.5, 0.0], [0.0, 1.0]],
            "diag_4_1_w_uu": _f(sp.diff((2 * uu)**2, uu, 2))}


def derive():
    return {"field": field_oracles(), "surface": surface_oracles(), "plane": plane_oracles(),
            "diagnostics": diagnostics_oracles(), "elliptic": elliptic_oracles()}


if __name__ == "__main__":
    FROZEN.write_text(json.dumps(derive(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {FROZEN}")
