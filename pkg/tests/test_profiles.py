import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma

from lindelof.errors import OutOfDomain, UnsupportedFamily
from lindelof.profiles import (
    FamilySpec,
    build_profile,
    default_grid,
    embed,
    heights,
    ode_profile,
    profile_cross_check,
    scale_profile,
)

T3 = gamma(0.25) * gamma(0.5) / (4 * gamma(0.75))
SPECS = [
    FamilySpec("euclid", 1.0, 2),
    FamilySpec("euclid", 0.7, 3),
    FamilySpec("euclid", 1.0, 4),
    FamilySpec("h2xr", 0.8),
    FamilySpec("hnxr", 0.5, 3),
    FamilySpec("h3min", 0.4),
    FamilySpec("cousin", 0.6),
]


def test_spec_validation_and_aliases():
    assert FamilySpec("H3Minimal", 1).family == "h3min"
    assert FamilySpec("h2r", 1).family == "h2xr"
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            FamilySpec("euclid", bad)
    with pytest.raises(ValueError):
        FamilySpec("torus", 1.0)


def test_euclid2_is_cosh():
    p = build_profile(FamilySpec("euclid", 1.0, 2))
    t = np.linspace(-4, 4, 17)
    assert np.max(np.abs(p.radius(t) - np.cosh(t))) <= 1e-12
    assert math.isinf(p.T)


def test_h3min_neck():
    p = build_profile(FamilySpec("h3min", 0.7))
    assert p.radius(0.0) == 0.7
    assert p.height(0.0) == 0.0


@pytest.mark.parametrize("a", [0.3, 1.0])
def test_cousin_closed_form(a):
    p = build_profile(FamilySpec("cousin", a))
    s = np.linspace(-4, 4, 33)
    lhs = np.cosh(2 * p.radius(s))
    assert np.max(np.abs(lhs - 2 * math.exp(-2 * a) * s * s - math.cosh(2 * a)) / lhs) < 1e-10


def test_finite_heights():
    assert build_profile(FamilySpec("euclid", 1.0, 3)).T == pytest.approx(T3, abs=1e-12)
    assert math.isfinite(build_profile(FamilySpec("hnxr", 0.5, 2)).T)
    for fam in ("h3min", "cousin"):
        assert math.isinf(build_profile(FamilySpec(fam, 0.5)).T)


def test_scale_profile():
    p = scale_profile(build_profile(FamilySpec("euclid", 1.0, 2)), 2.0)
    t = np.linspace(-3, 3, 13)
    assert np.max(np.abs(p.radius(t) - 2 * np.cosh(t / 2))) <= 1e-12
    q = build_profile(FamilySpec("euclid", 1.0, 3))
    assert scale_profile(q, 3.0).T == pytest.approx(3 * T3, abs=1e-9)
    same = scale_profile(q, 1.0)
    g = np.linspace(-1, 1, 9)
    assert np.array_equal(same.radius(g), q.radius(g))
    with pytest.raises(UnsupportedFamily):
        scale_profile(build_profile(FamilySpec("h3min", 0.5)), 2.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.0, 0.95))
def test_scaling_law(a, frac):
    """Euclidean catenoids are homothetic: a c(t/a)."""
    unit = build_profile(FamilySpec("euclid", 1.0, 3))
    p = build_profile(FamilySpec("euclid", a, 3))
    t = frac * p.T
    assert float(p.radius(t)) == pytest.approx(a * float(unit.radius(t / a)), rel=1e-10)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_parity(spec):
    p = build_profile(spec)
    s = default_grid(p, 21)
    assert np.allclose(p.radius(s), p.radius(-s), rtol=1e-13, atol=0)
    assert np.allclose(p.height(s), -p.height(-s), rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_cross_check_all_families(spec):
    assert profile_cross_check(spec, default_grid(build_profile(spec), 41)) <= 1e-8


def test_cross_check_examples():
    assert profile_cross_check(FamilySpec("euclid", 1.0, 2), np.linspace(0, 5, 51)) <= 1e-8
    T4 = build_profile(FamilySpec("euclid", 1.0, 4)).T
    assert profile_cross_check(FamilySpec("euclid", 1.0, 4), np.linspace(0, 0.95 * T4, 51)) <= 1e-7
    assert profile_cross_check(FamilySpec("h3min", 0.3), np.array([0.0])) == 0.0


def test_out_of_domain():
    p = build_profile(FamilySpec("euclid", 1.0, 3))
    with pytest.raises(OutOfDomain):
        p.radius(2 * p.T)
    with pytest.raises(OutOfDomain):
        ode_profile(p, np.array([1.5 * p.T]))


def test_embed_examples():
    assert np.allclose(embed(FamilySpec("euclid", 1.0, 2), 0.0, 0.0), [1.0, 0.0, 0.0], atol=1e-15)
    for theta in (0.0, 1.0, 2.5):
        x = embed(FamilySpec("h3min", 0.6), 0.0, theta)
        assert x[2] == pytest.approx(1 / math.cosh(0.6), abs=1e-15)


def test_embed_h3_by_hand():
    """Compose the Fermi chart with the ODE-integrated curve at s = 2."""
    spec = FamilySpec("h3min", 1.0)
    p = build_profile(spec)
    y, lam, _, _ = ode_profile(p, np.array([2.0]))[:, 0]
    expected = math.exp(lam) * np.array([0.0, math.tanh(y), 1.0 / math.cosh(y)])
    x = embed(spec, 2.0, math.pi / 2)
    assert x[2] > 0
    assert np.allclose(x, expected, atol=1e-10)
    # hyperbolic distance to the vertical axis through the origin is y
    assert math.asinh(math.hypot(x[0], x[1]) / x[2]) == pytest.approx(y, abs=1e-10)


def test_heights():
    V, X = heights(FamilySpec("h3min", 1.0))
    # golden value; cross-checked against the limit of the ODE height at s = 40
    assert V == pytest.approx(0.394275813078419, abs=1e-12)
    assert abs(X - math.exp(V)) < 1e-12
    p = build_profile(FamilySpec("h3min", 1.0))
    assert ode_profile(p, np.array([40.0]))[1, 0] == pytest.approx(V, abs=1e-10)
    assert heights(FamilySpec("euclid", 1.0, 3))[0] == pytest.approx(T3, abs=1e-12)
    for spec in (FamilySpec("euclid", 1.0, 2), FamilySpec("cousin", 0.5)):
        with pytest.raises(UnsupportedFamily):
            heights(spec)


@pytest.mark.parametrize("spec", [s for s in SPECS if s.family in ("h2xr", "h3min", "cousin")], ids=lambda s: s.label())
def test_unit_speed_arclength(spec):
    p = build_profile(spec)
    s = default_grid(p, 21)
    assert np.max(np.abs(p.speed(s) - 1.0)) <= 1e-10
