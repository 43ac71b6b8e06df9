import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from levykato import (NonIntegrableMeasure, SpecError, brownian, check_scaling, cp, drift, drift_gamma0, drift_plus_jumps,
                      eval_psi, dyadic_jumps, space_time, stable, stable_subordinator)
from levykato.levy_model import (ScalingWitness, Refuted, DyadicAtoms, PowerPiece, DensityMeasure, Triplet,
                                 UNDEFINED, finite_variation, log_exponent, shifted_stable_exponent)

freq = st.floats(min_value=1e-3, max_value=1e3)


def test_brownian_exponent_is_quadratic():
    assert eval_psi(brownian(2.0), 3.0) == pytest.approx(18.0)


def test_stable_exponent():
    assert eval_psi(stable(1.5, 2.0), -4.0).real == pytest.approx(2.0 * 4.0 ** 1.5)


def test_drift_exponent():
    assert eval_psi(drift(2.0), 1.5) == pytest.approx(-3.0j)


def test_compound_poisson_exponent():
    xi = 0.7
    assert eval_psi(cp([1.0], [2.0]), xi) == pytest.approx(2.0 * (1.0 - cmath.exp(1j * xi)))


def _jump_exponent_by_quadrature(xi, gamma=1.0, exponent=-1.5):
    # independent oracle: direct Levy-Khintchine integral of the one-sided density
    re = integrate.quad(lambda z: (1.0 - math.cos(xi * z)) * z ** exponent, 0.0, 1.0, limit=200)[0]
    im = integrate.quad(lambda z: (xi * z - math.sin(xi * z)) * z ** exponent, 0.0, 1.0, limit=200)[0]
    return complex(re, im - gamma * xi)


@pytest.mark.parametrize("xi", [0.3, 2.0, 17.0, 150.0])
def test_density_measure_exponent_matches_direct_integral(xi):
    want = _jump_exponent_by_quadrature(xi)
    direct = drift_plus_jumps().nu.psi_direct(xi) - 1j * xi
    assert abs(direct - want) <= 1e-8 * max(1.0, abs(want))
    # the interpolation table used by the kernels undersamples the cutoff oscillation
    got = eval_psi(drift_plus_jumps(), xi)
    assert abs(got - want) <= 5e-4 * max(1.0, abs(want))


@pytest.mark.parametrize("alpha", [0.75, 1.5])
@pytest.mark.parametrize("xi", [0.01, 0.9, 40.0, 3e3])
def test_dyadic_atoms_table_matches_brute_force(alpha, xi):
    nu = DyadicAtoms(alpha)
    got = float(nu.psi(np.array([xi]))[0].real)
    want = nu.brute_force_psi(xi, n_min=-80)
    assert got == pytest.approx(want, rel=1e-6)


def test_stable_subordinator_exponent_phase():
    v = eval_psi(stable_subordinator(0.5), 4.0)
    assert abs(v) == pytest.approx(2.0)
    assert cmath.phase(v) == pytest.approx(-math.pi / 4)


@given(freq)
def test_exponent_is_hermitian(xi):
    for spec in (stable(1.2), cp([1.0, -0.5], [1.0, 2.0]), drift_plus_jumps(), stable_subordinator(0.3)):
        a, b = eval_psi(spec, xi), eval_psi(spec, -xi)
        assert abs(a - b.conjugate()) <= 1e-9 * max(1.0, abs(a))


@given(freq)
def test_exponent_real_part_nonnegative(xi):
    for spec in (brownian(), stable(0.7), cp([2.0], [1.0]), drift_plus_jumps(), dyadic_jumps(1.2)):
        assert eval_psi(spec, xi).real >= -1e-10


def test_product_exponent_adds_components():
    spec = space_time()
    xi = np.array([[1.5, -2.0]])
    assert complex(spec.psi(xi)[0]) == pytest.approx(1.5 ** 2 + 2.0j)


def test_gamma0_for_finite_variation():
    assert drift_gamma0(cp([0.5], [1.0]))[0] == pytest.approx(0.0)
    # gamma - int_0^1 z * z^-1.5 dz = 1 - 2
    assert drift_gamma0(drift_plus_jumps())[0] == pytest.approx(-1.0)
    assert drift_gamma0(stable(1.5)) is UNDEFINED


def test_variation_facts():
    assert finite_variation(drift_plus_jumps()).finite
    assert not finite_variation(Triplet(0.0, 0.0, DensityMeasure([PowerPiece(1.0, -2.5, 0.0, 1.0)]))).finite
    assert finite_variation(stable(0.5)).finite
    assert not finite_variation(stable(1.0)).finite


def test_scaling_witness_for_stable_exponent():
    f = lambda x: np.abs(x) ** 1.3
    w = check_scaling(f, "WLSC", 1.3, 0.0)
    assert isinstance(w, ScalingWitness) and w.constant == pytest.approx(1.0)
    assert isinstance(check_scaling(f, "WLSC", 1.6, 0.0), Refuted)
    assert isinstance(check_scaling(f, "WUSC", 1.3, 0.0), ScalingWitness)


def test_bernstein_checks():
    for phi in (stable_subordinator(0.4).phi, shifted_stable_exponent(0.5, 1.0, 2.0), log_exponent(0.5)):
        assert all(phi.bernstein_checks().values())


@pytest.mark.parametrize("build", [
    lambda: stable(2.5),
    lambda: cp([0.0], [1.0]),
    lambda: cp([1.0], [-1.0]),
    lambda: Triplet(0.0, -1.0),
    lambda: PowerPiece(1.0, -1.5, -1.0, 1.0),
    lambda: stable_subordinator(1.0),
])
def test_invalid_specs_raise(build):
    with pytest.raises(SpecError):
        build()


def test_non_levy_density_is_rejected():
    with pytest.raises(NonIntegrableMeasure):
        DensityMeasure([PowerPiece(1.0, -3.5, 0.0, 1.0)])
