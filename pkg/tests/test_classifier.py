import math

import numpy as np
import pytest

from levykato import (SpecError, WrongCase, brownian, cp, drift, drift_plus_jumps, dyadic_jumps, space_time,
                      stable, stable_subordinator)
from levykato.classifier import LABELS, classify, hitting_transform, regularity_integral
from levykato.levy_model import Product
from levykato.potential import potential_density


@pytest.mark.parametrize("spec, label", [
    (brownian(), "C"),
    (stable(0.5), "A"),
    (stable(1.0), "A"),
    (stable(1.5), "C"),
    (drift(1.0), "B"),
    (drift_plus_jumps(), "B"),
    (cp([1.0], [1.0]), "CompoundPoisson"),
    (dyadic_jumps(1.5), "C"),
    (dyadic_jumps(0.75), "A"),
    (stable_subordinator(0.5), "A"),
])
def test_line_labels(spec, label):
    assert classify(spec).label == label


@pytest.mark.parametrize("spec, label", [
    (Product([brownian(), cp([1.0], [1.0])]), "Cprime"),
    (Product([drift(1.0), cp([1.0], [1.0])]), "Bprime"),
    (Product([stable(0.5), cp([1.0], [1.0])]), "Aprime"),
    (Product([cp([1.0], [1.0]), cp([2.0], [0.5])]), "CompoundPoisson"),
    (space_time(), "D_gt1_H0"),
    (brownian(dimension=3), "D_gt1_H0"),
])
def test_product_and_multidimensional_labels(spec, label):
    c = classify(spec)
    assert c.label == label and c.label in LABELS


def test_prime_label_records_subspace():
    c = classify(Product([brownian(), cp([1.0], [1.0])]))
    assert c.evidence["subspace_V"] == [1.0, 0.0]


def test_regularity_integral_brownian_closed_form():
    # int_0^inf dz / (1 + z^2)
    d = regularity_integral(brownian(), 1.0)
    assert d.verdict == "Converges"
    assert d.limit == pytest.approx(math.pi / 2, rel=1e-6)


def test_regularity_integral_diverges_for_cauchy():
    d = regularity_integral(stable(1.0), 1.0)
    assert d.verdict == "Diverges" and d.limit == math.inf


def test_regularity_integral_accepts_plain_callable():
    d = regularity_integral(lambda z: np.abs(z) ** 1.5, 2.0)
    # int_0^inf dz / (2 + z^1.5) = 2^(-1/3) (2 pi / 3) / sin(2 pi / 3)
    want = 2.0 ** (-1.0 / 3.0) * (2.0 * math.pi / 3.0) / math.sin(2.0 * math.pi / 3.0)
    assert d.limit == pytest.approx(want, rel=1e-6)


def test_nonpositive_lambda_rejected():
    with pytest.raises(SpecError):
        classify(brownian(), 0.0)


def test_hitting_transform_regular_case():
    grid = np.linspace(-4.0, 4.0, 161)
    c = classify(brownian())
    h = hitting_transform(potential_density(brownian(), 1.0, grid), c)
    assert h.values[80] == 1.0
    # for Brownian motion with unit generator coefficient, h(x) = exp(-|x|)
    assert np.max(np.abs(h.values - np.exp(-np.abs(grid)))) < 1e-5


def test_hitting_transform_polar_case_vanishes():
    grid = np.linspace(-1.0, 1.0, 5)
    k = potential_density(brownian(), 1.0, grid)
    h = hitting_transform(k, classify(stable(0.5)))
    assert np.all(h.values == 0.0)


def test_hitting_transform_compound_poisson_rejected():
    k = potential_density(brownian(), 1.0, np.linspace(-1.0, 1.0, 5))
    with pytest.raises(WrongCase):
        hitting_transform(k, classify(cp([1.0], [1.0])))
