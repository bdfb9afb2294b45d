import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclab.conformal_plane import affine, identity, mobius_automorphism, square
from qclab.errors import ContractViolation, ParameterError, ResolutionError
from qclab.field import ComplexField, DiskGrid
from qclab.qc_diagnostics import (beltrami, bilipschitz_probe, check_component_inequality,
                                  collar_profile, composition_laplacian_check,
                                  fit_poisson_constants, poisson_N, to_json,
                                  verify_gradient_chain)
from qclab.solver import poisson_extension, solve_laplace_dirichlet

AFFINE = lambda z: z + 0.3 * np.conj(z)
SMOOTH = lambda t: np.exp(1j * (t + 0.3 * np.sin(t)))
GRID33 = DiskGrid(n=33)
small = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=30, deadline=None)
@given(a=small, b=small)
def test_beltrami_of_affine_maps_is_exact(a, b):
    if abs(a) < 1e-3:
        return
    bel = beltrami(ComplexField.from_function(GRID33, lambda z: a * z + b * np.conj(z)))
    assert bel.k == pytest.approx(abs(b / a), rel=1e-9, abs=1e-12)
    assert bel.is_qc == (abs(b) < abs(a))


def test_beltrami_values_and_second_dilatation(grid65):
    bel = beltrami(ComplexField.from_function(grid65, AFFINE))
    I = grid65.interior
    assert np.allclose(bel.mu.values[I], 0.3, atol=1e-12)
    assert np.allclose(np.abs(bel.nu.values[I]), np.abs(bel.mu.values[I]))
    assert bel.degenerate_count == 0 and bel.n_nodes == I.sum()


@pytest.mark.parametrize("phi", [square(), affine(2 - 1j, 0.3)], ids=lambda m: m.name)
def test_k_invariant_under_polynomial_postcomposition(phi, grid65):
    # both sides are quadratic in x, y so the difference stencils are exact
    f = ComplexField.from_function(grid65, lambda z: AFFINE(z) + 0.2)
    k0 = beltrami(f).k
    assert beltrami(f.apply(phi)).k == pytest.approx(k0, abs=1e-9)


def test_k_invariance_under_mobius_postcomposition_converges():
    phi = mobius_automorphism(0.3 + 0.2j, 0.5)
    gaps = []
    for n in (65, 129):
        f = ComplexField.from_function(DiskGrid(n=n), lambda z: 0.5 * AFFINE(z))
        gaps.append(abs(beltrami(f.apply(phi)).k - beltrami(f).k))
    assert gaps[1] < gaps[0] / 3 and gaps[1] < 1e-4


def test_degenerate_maps(grid65):
    with pytest.raises(ContractViolation):
        beltrami(ComplexField.from_function(grid65, lambda z: np.conj(z)**2))
    bel = beltrami(ComplexField.from_function(grid65, lambda z: z**2))
    assert bel.degenerate_count == 1 and not bel.is_qc
    with pytest.raises(ParameterError):
        beltrami(ComplexField.from_function(grid65, AFFINE), where=np.zeros((65, 65), bool))


def test_poisson_N_oracle(grid65, oracle):
    f = ComplexField.from_function(grid65, lambda z: np.abs(z)**2 + 0j)
    N = poisson_N(f, [0.0, 1.0])
    assert N[0] == pytest.approx(oracle["diagnostics"]["abs_z2_N_at_M0"], abs=1e-9)
    assert N[1] == pytest.approx(oracle["diagnostics"]["abs_z2_N_at_M1"], abs=1e-9)


def test_poisson_fit_curve_is_monotone(grid65):
    f = ComplexField.from_function(grid65, lambda z: z + 0.3 * np.conj(z)**2)
    fit = fit_poisson_constants(f, [0, 0.5, 1, 2, 4])
    Ns = [n for _, n in fit.curve]
    assert all(a >= b for a, b in zip(Ns, Ns[1:]))
    assert fit.N_at(1.0) == Ns[2]
    with pytest.raises(ParameterError):
        fit.N_at(3.0)
    with pytest.raises(ParameterError):
        fit_poisson_constants(f, [-1.0])


def test_component_identity_on_affine(grid65, oracle):
    rep = check_component_inequality(ComplexField.from_function(grid65, AFFINE))
    assert rep.identity_error < 1e-12 and rep.sandwich_violations == 0
    assert rep.K == pytest.approx(oracle["diagnostics"]["affine_03_sandwich_upper"])
    A_over_B = (1 + 0.3)**2 / (1 - 0.3)**2
    assert A_over_B == pytest.approx(oracle["diagnostics"]["affine_03_A_over_B"])


def test_component_inequality_with_fitted_constants(grid65):
    f = ComplexField.from_function(grid65, lambda z: z + 0.2 * np.conj(z)**2 + 0.1 * z**2)
    M = 1.0
    N = float(poisson_N(f, [M])[0])
    rep = check_component_inequality(f, M=M, N=N)
    assert rep.violations_1pKM == 0
    assert rep.identity_error < 1e-10 and rep.sandwich_violations == 0


def test_component_inequality_rejects_non_qc(grid65):
    with pytest.raises(ContractViolation):
        check_component_inequality(ComplexField.from_function(grid65, lambda z: np.conj(z)))


def test_gradient_chain_on_affine(grid65, oracle):
    rep = verify_gradient_chain(ComplexField.from_function(grid65, AFFINE))
    assert rep.violations == 0
    assert rep.b_t == pytest.approx(2 * oracle["diagnostics"]["affine_03_abs_s_z"], rel=1e-12)


def test_gradient_chain_on_harmonic_extension(grid65):
    rep = verify_gradient_chain(solve_laplace_dirichlet(grid65, SMOOTH, method="direct"))
    assert rep.violations == 0 and rep.k < 1


def test_identity_composition_is_exact(grid65):
    f = poisson_extension(SMOOTH, grid65)
    rep = composition_laplacian_check(identity(), f, identity())
    assert rep.max_deviation == 0.0 and rep.n_valid > 0


def test_composition_check_converges_at_second_order():
    devs = []
    for n in (65, 129):
        f = poisson_extension(SMOOTH, DiskGrid(n=n))
        rep = composition_laplacian_check(mobius_automorphism(0.2 - 0.1j, 0.4), f,
                                          mobius_automorphism(-0.3j, 1.0),
                                          where=lambda z: np.abs(z) <= 0.9)
        devs.append(rep.max_deviation)
        assert rep.d_dzbar_modulus <= rep.d_dzbar + 1e-15
    assert 3.0 < devs[0] / devs[1] < 5.0


def test_composition_needs_evaluable_field(grid65):
    f = solve_laplace_dirichlet(grid65, SMOOTH, method="direct")
    with pytest.raises(ContractViolation):
        composition_laplacian_check(identity(), f, identity())


def test_collar_plateau_for_smooth_data(grid129):
    prof = collar_profile(poisson_extension(SMOOTH, grid129))
    assert prof.verdict == "plateau" and prof.exponent == 0.0
    assert prof.lipschitz_estimate == pytest.approx(prof.collars[-1][1], rel=0.3)
    deltas = [c[0] for c in prof.collars]
    assert all(a == 2 * b for a, b in zip(deltas, deltas[1:]))


def test_collar_growth_for_rough_data(grid129):
    f = solve_laplace_dirichlet(grid129, lambda t: np.sqrt(np.abs(np.angle(np.exp(1j * t)))),
                                method="direct")
    prof = collar_profile(f)
    assert prof.verdict == "growth" and prof.exponent < -0.3


def test_collar_needs_three_populated_bands(grid65):
    with pytest.raises(ResolutionError):
        collar_profile(poisson_extension(SMOOTH, grid65), n_collars=2)


def test_bilipschitz_identity(grid65):
    rep = bilipschitz_probe(ComplexField.from_function(grid65, lambda z: z))
    assert rep.positive and rep.floor == pytest.approx(1.0)


def test_reports_serialize_deterministically(tmp_path, grid65):
    f = poisson_extension(SMOOTH, grid65)
    for rep in (beltrami(f), collar_profile(f), fit_poisson_constants(f, [0, 1]),
                verify_gradient_chain(f)):
        text = to_json(rep, tmp_path / "r.json")
        assert text == to_json(rep)
        assert json.loads((tmp_path / "r.json").read_text()) == json.loads(text)
    bel = beltrami(f)
    bel.to_csv(tmp_path / "mu.csv")
    rows = np.loadtxt(tmp_path / "mu.csv", delimiter=",", skiprows=1)
    assert rows.shape == (grid65.interior.sum(), 5)
    assert to_json({"x": float("nan")}) == '{\n  "x": "nan"\n}'
