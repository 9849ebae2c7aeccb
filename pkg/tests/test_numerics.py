import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma

from lindelof import numerics as nm
from lindelof.errors import Divergent, NoSignChange


def test_constant_integrand():
    assert nm.integrate(lambda u: 1.0, 0.0, 1.0).value == pytest.approx(1.0, abs=1e-14)


def test_t3_closed_form():
    q = nm.integrate(nm.Integrand(lambda u: (u**4 - 1.0) ** -0.5, (1.0,)), 1.0)
    assert q.value == pytest.approx(gamma(0.25) * gamma(0.5) / (4 * gamma(0.75)), abs=1e-10)


def test_t2_diverges():
    with pytest.raises(Divergent):
        nm.integrate(nm.Integrand(lambda u: (u * u - 1.0) ** -0.5, (1.0,)), 1.0)


def test_inverse_sqrt_singularity():
    q = nm.integrate(nm.Integrand(lambda x: 1.0 / math.sqrt(x), (0.0,)), 0.0, 4.0)
    assert q.value == pytest.approx(4.0, abs=1e-12)


def test_empty_range_rejected():
    with pytest.raises(ValueError):
        nm.integrate(lambda x: x, 1.0, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_quadrature_additive(w1, w2):
    f = lambda x: math.exp(-x) * math.cos(3 * x)
    whole = nm.integrate(f, 0.0, w1 + w2).value
    parts = nm.integrate(f, 0.0, w1).value + nm.integrate(f, w1, w1 + w2).value
    assert whole == pytest.approx(parts, abs=1e-11)


def test_quadrature_deterministic():
    f = nm.Integrand(lambda u: (u**4 - 1.0) ** -0.5, (1.0,))
    assert nm.integrate(f, 1.0).value == nm.integrate(f, 1.0).value


def test_ivp_exponential():
    traj = nm.solve_ivp(lambda t, y: y, 0.0, [1.0], 1.0)
    assert traj.y[-1, 0] == pytest.approx(math.e, rel=1e-10)
    assert traj.blowup_time is None


def _catenary_rhs(n):
    return lambda t, y: np.array([y[1], (n - 1) * (1 + y[1] ** 2) / y[0]])


def test_ivp_catenary():
    traj = nm.solve_ivp(_catenary_rhs(2), 0.0, [1.0, 0.0], 5.0)
    t = np.linspace(0, 5, 11)
    assert np.max(np.abs(traj(t)[0] - np.cosh(t))) <= 1e-8


def test_ivp_blowup_at_t3():
    T3 = gamma(0.25) * gamma(0.5) / (4 * gamma(0.75))
    traj = nm.solve_ivp(_catenary_rhs(3), 0.0, [1.0, 0.0], 5.0)
    assert traj.blowup_time == pytest.approx(T3, abs=1e-6)


def test_root_odd_function():
    assert nm.find_root(math.tanh, -1.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_root_xi0_vs_bisection():
    g = lambda t: 1.0 - t * math.tanh(t)
    lo, hi = 1.0, 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if g(mid) > 0 else (lo, mid)
    assert nm.find_root(g, 1.0, 2.0) == pytest.approx(0.5 * (lo + hi), abs=1e-10)


def test_root_no_sign_change():
    with pytest.raises(NoSignChange):
        nm.find_root(lambda x: x * x + 1, -1.0, 1.0)


def test_root_identically_zero_returns_midpoint():
    assert nm.find_root(lambda x: 0.0, 1.0, 3.0) == 2.0


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(1e-3, 1e3))
def test_root_invariant_under_scaling(r, k):
    g = lambda x: x - r
    assert nm.find_root(lambda x: k * g(x), 0.0, 6.0) == pytest.approx(nm.find_root(g, 0.0, 6.0), abs=1e-11)


def test_bracket_sign_change():
    assert nm.bracket_sign_change(np.cos, np.linspace(0, 3, 31)) == pytest.approx((1.5, 1.6))
    assert nm.bracket_sign_change(np.exp, np.linspace(0, 1, 5)) is None


def test_cumulative_integral_matches_closed_form():
    F = nm.CumulativeIntegral(np.cos)
    s = np.array([0.0, 0.3, 7.9, 30.0])
    assert np.max(np.abs(F(s) - np.sin(s))) <= 1e-12


def test_invert_monotone():
    x = nm.invert_monotone(lambda u: u**3, lambda u: 3 * u * u, np.array([0.001, 0.5, 8.0]), 0.0, 3.0)
    assert np.allclose(x, np.cbrt([0.001, 0.5, 8.0]), atol=1e-12)


@pytest.mark.parametrize("order", [1, 2])
def test_central_diff(order):
    x = np.linspace(-1, 1, 7)
    d = nm.central_diff(np.sin, x, 1e-2, order)
    expected = np.cos(x) if order == 1 else -np.sin(x)
    assert np.max(np.abs(d - expected)) <= 1e-9
