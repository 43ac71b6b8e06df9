import math

import numpy as np
import pytest

from levykato import AtomAtOrigin, SpecError, brownian, cp, drift, stable, stable_subordinator
from levykato.kernels import line_kernel, natural_scale, self_similar_index, weight_kernel
from levykato.potential import potential_density, truncated_potential

Z = np.array([-3.0, -0.7, -0.01, 0.001, 0.2, 1.0, 4.0])


def test_brownian_line_kernel_is_exponential():
    k = line_kernel(brownian(), 1.0, math.inf)
    assert np.allclose(k(Z), 0.5 * np.exp(-np.abs(Z)), rtol=1e-4)


def test_brownian_truncated_line_kernel():
    k = line_kernel(brownian(), 1.0, 0.5)
    want = truncated_potential(brownian(), 1.0, 0.5, np.sort(Z)).values
    assert np.allclose(k(np.sort(Z)), want, rtol=1e-3)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_scaled_stable_kernel_matches_direct_inversion(lam):
    k = line_kernel(stable(1.5), lam, math.inf)
    z = np.array([-2.0, -0.3, 0.05, 0.8, 3.0])
    direct = potential_density(stable(1.5), lam, z).values
    assert np.allclose(k(z), direct, rtol=2e-3)


def test_polar_stable_kernel_singularity():
    # for alpha = 1/2: G(z) = |z|^(-1/2) / sqrt(2 pi) + log|z| / pi + O(1) as z -> 0
    k = line_kernel(stable(0.5), 1.0, math.inf)
    assert k.singular_at_zero
    z = np.array([1e-7, 1e-6, 1e-5])
    rest = k(z) - 1.0 / np.sqrt(2.0 * math.pi * z) - np.log(z) / math.pi
    assert np.ptp(rest) < 0.02


def test_drift_kernel_closed_form():
    k = line_kernel(drift(2.0), 1.0, 3.0)
    z = np.array([-1.0, 0.5, 5.0, 7.0])
    want = np.where((z > 0) & (z < 6.0), np.exp(-z / 2.0) / 2.0, 0.0)
    assert np.allclose(k(z), want)


def test_subordinator_kernel_is_one_sided():
    k = line_kernel(stable_subordinator(0.5), 1.0, math.inf)
    assert np.all(k(np.array([-1.0, -0.1])) == 0.0)
    assert k(np.array([0.1]))[0] > 0.0


def test_compound_poisson_has_no_line_kernel():
    with pytest.raises(AtomAtOrigin):
        line_kernel(cp([1.0], [1.0]), 1.0, math.inf)


def test_invalid_kernel_arguments():
    with pytest.raises(SpecError):
        line_kernel(brownian(), 0.0, math.inf)
    with pytest.raises(SpecError):
        line_kernel(brownian(dimension=2), 1.0, math.inf)


def test_self_similar_index():
    assert self_similar_index(brownian()) == 2.0
    assert self_similar_index(stable(0.7)) == 0.7
    assert self_similar_index(drift(1.0)) is None


def test_natural_scale_solves_exponent_equation():
    rho = natural_scale(stable(1.5), 4.0, math.inf)
    assert abs(stable(1.5).psi_scalar(1.0 / rho)) == pytest.approx(4.0, rel=1e-6)


def test_weight_kernel_for_square_root_exponent():
    w = weight_kernel(stable_subordinator(0.5).phi)
    z = np.array([-0.5, 0.04, 0.25, 1.0])
    assert np.allclose(w(z), [0.0, 2.5, 1.0, 0.5])
