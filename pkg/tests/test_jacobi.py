import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindelof import stability
from lindelof.errors import OutOfDomain, UnsupportedFamily
from lindelof.jacobi import (
    _normal_variation,
    combined_field,
    jacobi_pair,
    standard_grid,
    tail_integral,
    variation_fd_check,
    wronskian,
    wronskian_deviation,
)
from lindelof.profiles import FamilySpec

SPECS = [
    FamilySpec("euclid", 1.0, 2),
    FamilySpec("euclid", 1.0, 3),
    FamilySpec("h2xr", 1.0),
    FamilySpec("hnxr", 0.5, 3),
    FamilySpec("h3min", 0.3),
    FamilySpec("h3min", 1.0),
    FamilySpec("cousin", 0.7),
]
A1 = 0.5 * math.acosh(math.sqrt((11 + 8 * math.sqrt(2)) / 7))


def test_r3_fields():
    pair = jacobi_pair(FamilySpec("euclid", 1.0, 2))
    t = np.linspace(-4, 4, 17)
    assert np.allclose(pair.v(t), np.tanh(t), atol=1e-14)
    assert np.allclose(pair.e(t), 1 - t * np.tanh(t), atol=1e-14)
    assert pair.e(0.0) == 1.0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_euclid_higher_dim_neck_value(n):
    assert jacobi_pair(FamilySpec("euclid", 1.0, n)).e(0.0) == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("a", [0.3, 1.2])
def test_cousin_v(a):
    pair = jacobi_pair(FamilySpec("cousin", a))
    s = np.linspace(0, 6, 13)
    ref = math.exp(-a) * s / np.sqrt(s * s + math.exp(2 * a) * math.sinh(a) ** 2)
    assert np.allclose(pair.v(s), ref, atol=1e-13)
    assert pair.v(0.0) == 0.0
    assert pair.v_limit == pytest.approx(math.exp(-a))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_parity_and_normalisation(spec):
    pair = jacobi_pair(spec)
    s = standard_grid(spec, 21)
    assert np.allclose(pair.e(s), pair.e(-s), rtol=1e-13, atol=1e-15)
    assert np.allclose(pair.v(s), -pair.v(-s), rtol=1e-13, atol=1e-15)
    assert pair.normalized_e(0.0) == pytest.approx(-1.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 4.0), st.floats(-4.0, 4.0))
def test_combined_field_vanishes_at_minus_alpha(alpha, s):
    pair = jacobi_pair(FamilySpec("euclid", 1.0, 2))
    w = combined_field(pair, alpha)
    assert abs(w(-alpha)) <= 1e-12
    # linear combination of the two fields
    assert w(s) == pytest.approx(pair.v(alpha) * pair.e(s) + pair.e(alpha) * pair.v(s), abs=1e-12)


def test_combined_field_at_z_is_multiple_of_e():
    spec = FamilySpec("h2xr", 1.0)
    pair = jacobi_pair(spec)
    z = stability.variation_zero(spec)
    w = combined_field(pair, z)
    s = np.linspace(-3, 3, 13)
    assert np.allclose(w(s), pair.v(z) * pair.e(s), atol=1e-10)
    assert abs(w(z)) <= 1e-10


def test_combined_field_single_positive_zero():
    pair = jacobi_pair(FamilySpec("euclid", 1.0, 2))
    w = combined_field(pair, 0.5)
    s = np.linspace(1e-3, 30, 30001)
    assert np.count_nonzero(np.diff(np.sign(w(s)))) == 1


def test_combined_field_domain():
    pair = jacobi_pair(FamilySpec("euclid", 1.0, 3))
    with pytest.raises(OutOfDomain):
        combined_field(pair, pair.T)


def test_tail_integral_signs():
    assert tail_integral(FamilySpec("h3min", A1)).value < 0
    assert tail_integral(FamilySpec("h3min", 0.1)).value > 0
    assert abs(tail_integral(FamilySpec("h3min", 0.4955)).value) < 2e-3
    assert not tail_integral(FamilySpec("cousin", 0.5)).convergent
    with pytest.raises(UnsupportedFamily):
        tail_integral(FamilySpec("euclid", 1.0, 3))


def test_r3_wronskian_exact():
    pair = jacobi_pair(FamilySpec("euclid", 1.0, 2))
    t = np.linspace(-6, 6, 49)
    assert np.max(np.abs(wronskian(pair, t) + 1.0)) <= 1e-10


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_wronskian_constant(spec):
    assert wronskian_deviation(spec, standard_grid(spec)) <= 1e-6


def test_variation_r3():
    chk = variation_fd_check(FamilySpec("euclid", 1.0, 2), np.linspace(-4, 4, 33))
    assert chk.deviation <= 1e-4
    assert abs(chk.scale) == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_variation_matches_e(spec):
    chk = variation_fd_check(spec, standard_grid(spec, 21))
    assert chk.deviation <= 1e-4
    assert abs(chk.scale) == pytest.approx(1.0, abs=1e-4)
    # at the neck the normal variation is the neck value of e, up to orientation
    fd0 = float(_normal_variation(spec, np.array([0.0]), 1e-5)[0])
    assert abs(fd0) == pytest.approx(abs(jacobi_pair(spec).e(0.0)), abs=1e-6)
