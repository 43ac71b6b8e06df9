import math

import numpy as np
import pytest
from scipy import integrate, special

from levykato import (HorizonTooShort, SamplerMismatch, SpecError, brownian, cp, drift_plus_jumps, stable,
                      stable_subordinator)
from levykato import montecarlo as mc
from levykato import potentials as P


def _within(est, want, extra=0.0):
    return abs(est.value - want) <= 3.0 * est.se + extra


def test_constant_potential_is_exact():
    est = mc.estimate_time_functional(mc.sampler_for(stable(1.5)), P.constant(1.0), t=0.7, n_paths=2000)
    assert est.value == pytest.approx(0.7, rel=1e-12)
    assert est.se < 1e-15


def test_brownian_occupation_of_unit_interval():
    # int_0^1 P(0 <= X_u <= 1) du with X_u ~ N(0, 2u)
    want = integrate.quad(lambda u: 0.5 * special.erf(1.0 / math.sqrt(4.0 * u)), 0.0, 1.0)[0]
    est = mc.estimate_time_functional(mc.sampler_for(brownian()), P.indicator(0.0, 1.0), n_paths=20000, seed=3)
    assert _within(est, want)


def test_cauchy_occupation_of_symmetric_interval():
    # P(|X_u| <= 1) = (2 / pi) arctan(1 / u) for the Cauchy process
    want = integrate.quad(lambda u: 2.0 / math.pi * math.atan(1.0 / u), 0.0, 1.0)[0]
    est = mc.estimate_time_functional(mc.sampler_for(stable(1.0)), P.indicator(-1.0, 1.0), n_paths=20000, seed=5)
    assert _within(est, want)


def test_compound_poisson_time_at_first_level():
    # int_0^1 P(N_u = 1) du = 1 - 2/e for a unit-rate Poisson process
    est = mc.estimate_time_functional(mc.sampler_for(cp([1.0], [1.0])), P.indicator(0.5, 1.5), n_paths=20000)
    assert _within(est, 1.0 - 2.0 / math.e)


def test_estimates_are_reproducible():
    s = mc.sampler_for(stable(0.8))
    a = mc.estimate_time_functional(s, P.indicator(-0.5, 0.5), n_paths=3000, seed=11)
    b = mc.estimate_time_functional(s, P.indicator(-0.5, 0.5), n_paths=3000, seed=11)
    c = mc.estimate_time_functional(s, P.indicator(-0.5, 0.5), n_paths=3000, seed=12)
    assert a.to_dict() == b.to_dict()
    assert a.value != c.value


def test_translation_invariance():
    s = mc.sampler_for(brownian())
    a = mc.estimate_time_functional(s, P.indicator(0.0, 1.0), x=0.0, n_paths=2000, seed=2)
    b = mc.estimate_time_functional(s, P.indicator(3.0, 4.0), x=3.0, n_paths=2000, seed=2)
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_halving_the_step_changes_little():
    s = mc.sampler_for(brownian())
    q = P.indicator(0.0, 1.0)
    a = mc.estimate_time_functional(s, q, n_paths=5000, seed=4, dt=0.004)
    b = mc.estimate_time_functional(s, q, n_paths=5000, seed=4, dt=0.002)
    assert abs(a.value - b.value) <= 3.0 * math.hypot(a.se, b.se)


def test_discounted_constant_is_exact():
    est = mc.estimate_space_functional(mc.sampler_for(brownian()), P.constant(1.0), lam=2.0, n_paths=500)
    T = est.horizon
    assert est.value == pytest.approx((1.0 - math.exp(-2.0 * T)) / 2.0, rel=1e-12)
    assert math.exp(-2.0 * T) / 2.0 < 0.01 * est.value


def test_explicit_short_horizon_rejected():
    with pytest.raises(HorizonTooShort):
        mc.estimate_space_functional(mc.sampler_for(brownian()), P.constant(1.0), lam=1.0, horizon=1.0,
                                     n_paths=100)


def test_compound_poisson_ball_floor():
    # the path sits at the start until the first jump: at least c / (lam + rate)
    s = mc.sampler_for(cp([1.0], [1.0]))
    ests = mc.estimate_space_functional(s, P.constant(2.0), lam=1.0, r=[0.2, 0.1], n_paths=2000)
    for e in ests:
        assert e.value >= 1.0 - 3.0 * e.se
    assert ests[0].value == ests[1].value


def test_comb_ball_functional_does_not_vanish():
    # a start inside block 6 keeps a share of the block in every small ball
    s = mc.sampler_for(brownian())
    a, b, _ = P.comb_block(6)
    ests = mc.estimate_space_functional(s, P.comb(), x=0.5 * (a + b), lam=1.0, r=[0.1, 0.02], n_paths=300,
                                        seed=1)
    for e in ests:
        assert e.value > 0.3


def test_bad_arguments():
    s = mc.sampler_for(brownian())
    with pytest.raises(SpecError):
        mc.estimate_time_functional(s, P.constant(1.0), t=0.0)
    with pytest.raises(SpecError):
        mc.estimate_space_functional(s, P.constant(1.0), lam=0.0)


@pytest.mark.parametrize("spec", [brownian(), stable(0.5), stable(1.5), cp([1.0, -1.0], [0.5, 1.0]),
                                  stable_subordinator(0.5)])
def test_exact_samplers_pass_characteristic_function_check(spec):
    s = mc.sampler_for(spec)
    assert s.exact
    rep = mc.validate_sampler(s, spec, n_paths=20000, seed=7)
    assert rep["passed"]


def test_crude_truncation_fails_characteristic_function_check():
    spec = drift_plus_jumps()
    with pytest.raises(SamplerMismatch) as info:
        mc.validate_sampler(mc.sampler_for(spec, eps_jump=0.5, gaussian_small=False), spec, n_paths=20000)
    assert not info.value.report["passed"]


def test_truncated_sampler_reports_its_bias():
    s = mc.sampler_for(drift_plus_jumps(), eps_jump=1.0 / 64)
    assert not s.exact and s.eps_jump == 1.0 / 64
    assert s.truncation_bias > 0.0


def test_standard_stable_variables():
    rng = np.random.default_rng(0)
    x = mc.symmetric_stable_standard(rng, 1.5, 200000)
    # E exp(i x) = exp(-1) for psi = |xi|^alpha
    assert abs(np.mean(np.cos(x)) - math.exp(-1.0)) < 0.01
    y = mc.positive_stable_standard(rng, 0.5, 200000)
    # E exp(-y) = exp(-1) for the Laplace exponent u^alpha
    assert np.all(y > 0) and abs(np.mean(np.exp(-y)) - math.exp(-1.0)) < 0.01
