import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclab.conformal_plane import (MAP_CATALOG, affine, derivative_bounds, identity,
                                   mobius_automorphism, polynomial, square, theodorsen_map)
from qclab.domains import TWO_PI, disk, ellipse, fourier_polar
from qclab.errors import ConvergenceError, ParameterError
from qclab.field import ComplexField, DiskGrid
from qclab.qc_diagnostics import beltrami


def test_mobius_oracle(oracle, grid129):
    m = mobius_automorphism(0.5)
    assert abs(m(0) - complex(*oracle["plane"]["mobius_05_value_at_0"])) < 1e-15
    assert abs(m.derivative(0) - complex(*oracle["plane"]["mobius_05_derivative_at_0"])) < 1e-15
    b = derivative_bounds(m, grid129)
    lo, hi = oracle["plane"]["mobius_05_abs_derivative_range"]
    assert b.inf_abs == pytest.approx(lo, rel=1e-12) and b.sup_abs == pytest.approx(hi, rel=1e-12)
    assert not b.anomaly


@settings(max_examples=30, deadline=None)
@given(r=st.floats(0, 0.95), arg=st.floats(0, 6.28), theta=st.floats(0, 6.28))
def test_mobius_preserves_circle_and_disk(r, arg, theta):
    m = mobius_automorphism(r * np.exp(1j * arg), theta)
    t = np.linspace(0, TWO_PI, 64)
    assert np.allclose(np.abs(m(np.exp(1j * t))), 1, atol=1e-9)
    assert np.all(np.abs(m(0.5 * np.exp(1j * t))) < 1)


def test_mobius_rejects_boundary_parameter():
    with pytest.raises(ParameterError):
        mobius_automorphism(1.0)


@pytest.mark.parametrize("m", [identity(), mobius_automorphism(0.3 - 0.2j, 1.0), square(),
                               affine(2 - 1j, 0.5), polynomial([0, 1, 0.2, 0.05])],
                         ids=lambda m: m.name)
def test_derivatives_match_finite_differences(m):
    z = np.array([0.1 + 0.2j, -0.4 + 0.1j])
    eps = 1e-6
    assert np.allclose(m.derivative(z), (m(z + eps) - m(z - eps)) / (2 * eps), atol=1e-8)
    assert np.allclose(m.second_derivative(z),
                       (m.derivative(z + eps) - m.derivative(z - eps)) / (2 * eps), atol=1e-7)


def test_compose_chain_rule():
    a, b = mobius_automorphism(0.2), square()
    c = b.compose(a)
    z = 0.3 + 0.1j
    assert c(z) == pytest.approx(a(z)**2)
    assert c.derivative(z) == pytest.approx(2 * a(z) * a.derivative(z))


def test_theodorsen_disk_is_translation():
    m = theodorsen_map(disk(0.5, 0.1j), n_modes=64)
    z = np.array([0, 0.3, 0.5j])
    assert np.allclose(m(z), 0.1j + 0.5 * z, atol=1e-13)


@pytest.mark.parametrize("dom", [fourier_polar([1, 0, 0.2, 0, 0]), ellipse(1, 0.8),
                                 fourier_polar([1, 0.05, 0, 0.2, 0.03])], ids=lambda d: d.name)
def test_theodorsen_maps_circle_to_boundary(dom):
    m = theodorsen_map(dom, n_modes=256)
    phi = np.linspace(0, TWO_PI, 301)
    img = m(np.exp(1j * phi))
    theta = m.boundary_correspondence(phi)
    assert np.max(np.abs(img - dom.point(theta))) < 1e-8
    assert abs(m(0) - dom.center) < 1e-14
    d0 = m.derivative(0)
    assert d0.real > 0 and abs(d0.imag) < 1e-12
    assert np.allclose(m.inverse_correspondence(theta), phi, atol=1e-10)
    assert np.all(np.diff(theta) > 0)


def test_theodorsen_derivative_is_bounded_away_from_zero():
    m = theodorsen_map(fourier_polar([1, 0, 0, 0.2, 0]))
    b = derivative_bounds(m, DiskGrid(n=65))
    assert b.inf_abs > 0.3 and b.sup_abs < 3 and not b.anomaly


def test_theodorsen_diverges_for_wild_domain():
    with pytest.raises(ConvergenceError):
        theodorsen_map(fourier_polar([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.45, 0, 0, 0, 0]),
                       max_sweeps=200)


def test_theodorsen_rejects_non_power_of_two():
    with pytest.raises(ParameterError):
        theodorsen_map(disk(), n_modes=100)


def test_catalog_names():
    assert {"identity", "mobius", "square", "affine"} <= set(MAP_CATALOG)


def test_theodorsen_circle_is_immediate_fixed_point():
    assert theodorsen_map(disk(), n_modes=64).info["residual"] <= 1e-12


def test_mobius_composition_is_mobius(rng):
    a1, a2 = 0.4 * np.exp(1j), -0.3 + 0.5j
    r1, r2 = 0.7, 2.1
    m1, m2 = mobius_automorphism(a1, r1), mobius_automorphism(a2, r2)
    comp = m1.compose(m2)
    # zero of the composition: m2(a) = a1
    w = a1 / np.exp(1j * r2)
    a = (w + a2) / (1 + np.conj(a2) * w)
    theta = np.angle(comp.derivative(a) * (1 - abs(a)**2))
    closed = mobius_automorphism(a, theta)
    z = 0.95 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    assert np.max(np.abs(comp(z) - closed(z))) <= 1e-12


@pytest.mark.parametrize("m", [identity(), square(), affine(2 - 1j, 0.5),
                               polynomial([0.1, 1, 0.3j])], ids=lambda m: m.name)
def test_catalog_polynomial_maps_pass_cauchy_riemann_check(m, grid65):
    f = ComplexField.from_function(grid65, m.forward)
    assert beltrami(f).k <= 1e-6


def test_mobius_cauchy_riemann_check_converges():
    m = mobius_automorphism(0.2, 0.3)
    ks = [beltrami(ComplexField.from_function(DiskGrid(n=n), m.forward)).k for n in (65, 129)]
    assert 3.5 < ks[0] / ks[1] < 4.5


def test_theodorsen_ellipse_like_map_is_holomorphic_on_grid():
    m = theodorsen_map(fourier_polar([1, 0, 0, 0.2, 0]))  # r = 1 + 0.2 cos 2 theta
    assert abs(m(0)) <= 0.25
    grid = DiskGrid(n=257)
    bel = beltrami(ComplexField.from_function(grid, m.forward), where=lambda z: np.abs(z) <= 0.95)
    assert bel.k <= 1e-4


def test_identity_derivative_bounds(grid65):
    b = derivative_bounds(identity(), grid65)
    assert (b.inf_abs, b.sup_abs) == (1.0, 1.0)
