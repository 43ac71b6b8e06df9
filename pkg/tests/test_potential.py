import math

import numpy as np
import pytest
from scipy import integrate, special

from levykato import (CaseAViolation, SpecError, brownian, cp, stable, stable_subordinator)
from levykato.classifier import classify, hitting_transform
from levykato.levy_model import log_exponent
from levykato.potential import (harnack_check, potential_density, subordinator_weight, transition_density,
                                truncated_potential, weight_function)


def test_brownian_resolvent_matches_exponential():
    grid = np.linspace(-8.0, 8.0, 801)
    k = potential_density(brownian(), 1.0, grid)
    assert np.max(np.abs(k.values - 0.5 * np.exp(-np.abs(grid)))) < 1e-5


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_brownian_resolvent_scales_with_lambda(lam):
    grid = np.array([-1.0, 0.0, 0.3, 2.0])
    k = potential_density(brownian(), lam, grid)
    s = math.sqrt(lam)
    assert np.allclose(k.values, np.exp(-s * np.abs(grid)) / (2.0 * s), atol=1e-6)


def test_stable_resolvent_mass():
    # G integrates to 1/lam; the kernel decays like |x|^-2.5, so integrate on a long window
    grid = np.linspace(-40.0, 40.0, 4001)
    k = potential_density(stable(1.5), 2.0, grid)
    mass = integrate.simpson(k.values, x=grid)
    tail = 2.0 * (1.0 / 2.0) * integrate.quad(lambda x: stable_tail(x), 40.0, np.inf)[0]
    assert mass + tail == pytest.approx(0.5, abs=2e-3)


def stable_tail(x):
    # leading large-|x| term of the 1.5-stable density times 1/lam^2, with lam = 2
    return math.gamma(2.5) * math.sin(0.75 * math.pi) / math.pi * x ** -2.5 / 2.0


def test_transition_density_is_gaussian():
    grid = np.linspace(-5.0, 5.0, 41)
    t = 0.7
    p = transition_density(brownian(), t, grid)
    want = np.exp(-grid ** 2 / (4 * t)) / math.sqrt(4 * math.pi * t)
    assert np.max(np.abs(p.values - want)) < 1e-8


def test_transition_density_is_cauchy():
    grid = np.linspace(-5.0, 5.0, 41)
    t = 1.3
    p = transition_density(stable(1.0), t, grid)
    assert np.max(np.abs(p.values - t / (math.pi * (t * t + grid ** 2)))) < 1e-7


def test_truncated_potential_brownian_closed_form():
    # int_0^t e^{-u} p(u, x) du for p(u, x) Gaussian with variance 2u
    grid = np.array([0.0, 0.25, 1.0, 2.5])
    t = 2.0
    k = truncated_potential(brownian(), 1.0, t, grid)
    want = [integrate.quad(lambda u: math.exp(-u - x * x / (4 * u)) / math.sqrt(4 * math.pi * u), 0, t)[0]
            for x in grid]
    assert np.allclose(k.values, want, atol=1e-7)


def test_truncated_potential_routes_agree():
    grid = np.linspace(-2.0, 2.0, 9)
    a = truncated_potential(stable(1.5), 1.0, 0.5, grid)
    b = truncated_potential(stable(1.5), 1.0, 0.5, grid, method="time")
    assert np.max(np.abs(a.values - b.values)) < 1e-8
    # at the origin p(u, 0) = Gamma(5/3) u^(-2/3) / pi
    want = math.gamma(5 / 3) / math.pi * special.gammainc(1 / 3, 0.5) * math.gamma(1 / 3)
    assert a.values[4] == pytest.approx(want, rel=1e-9)


def test_truncated_potential_increases_to_resolvent():
    grid = np.array([0.0, 0.5, 1.0])
    full = potential_density(brownian(), 1.0, grid).values
    prev = np.zeros(3)
    for t in (0.5, 2.0, 8.0, 30.0):
        cur = truncated_potential(brownian(), 1.0, t, grid).values
        assert np.all(cur >= prev - 1e-12) and np.all(cur <= full + 1e-9)
        prev = cur
    assert np.allclose(prev, full, atol=1e-9)


def test_resolvent_requires_convergent_integral():
    with pytest.raises(CaseAViolation):
        potential_density(stable(0.5), 1.0, np.array([0.0, 1.0]))


def test_bad_grid_rejected():
    with pytest.raises(SpecError):
        potential_density(brownian(), 1.0, np.array([1.0, 0.0]))
    with pytest.raises(SpecError):
        transition_density(brownian(), -1.0, np.array([0.0]))


def test_density_route_refuses_compound_poisson():
    with pytest.raises(Exception):
        transition_density(cp([1.0], [1.0]), 1.0, np.array([0.0]))


def test_stable_subordinator_weight_is_power():
    # phi(u) = u^(1/2): weight = z^(-1/2) / 2
    z = np.geomspace(0.01, 1.0, 50)
    w = subordinator_weight(stable_subordinator(0.5), z)
    ratio = w.values / (z ** -0.5 / math.sqrt(math.pi))
    assert np.ptp(ratio) < 1e-12
    assert ratio[0] == pytest.approx(math.sqrt(math.pi) / 2)


def test_weight_function_matches_grid_version():
    phi = log_exponent(0.5)
    z = np.array([0.02, 0.3, 1.0])
    assert np.allclose(weight_function(phi)(z), subordinator_weight(phi, z).values)
    assert weight_function(phi)(np.array([-1.0, 0.0])).tolist() == [0.0, 0.0]


def test_weight_grid_must_lie_in_unit_interval():
    with pytest.raises(SpecError):
        subordinator_weight(stable_subordinator(0.5), np.array([0.5, 2.0]))


@pytest.mark.parametrize("spec", [brownian(), stable(1.5)])
def test_harnack_bound_holds(spec):
    grid = np.linspace(-4.0, 4.0, 401)
    k = potential_density(spec, 1.0, grid)
    rep = harnack_check(k, hitting_transform(k, classify(spec)))
    assert rep.holds and rep.slack >= 0.0
    if spec.nu.total_mass() == 0:
        # h(x) = e^{-|x|}, so the constant is e
        assert rep.details["M"] == pytest.approx(math.e, rel=1e-4)
