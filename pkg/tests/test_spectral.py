import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigvalsh_tridiagonal

from lindelof import numerics as nm
from lindelof.errors import OutOfDomain
from lindelof.profiles import FamilySpec
from lindelof.spectral import (
    SLProblem,
    _r3_potential,
    assemble,
    discretize,
    index_on_interval,
    kth_eigenvalue,
    lambda1,
    recovered_potential,
    spectrum,
    sturm_count,
)
from lindelof.stability import variation_zero

XI0 = 1.1996786402577
R3 = FamilySpec("euclid", 1.0, 2)


def test_r3_potential():
    prob = assemble(R3, (-XI0, XI0))
    t = np.linspace(-XI0, XI0, 11)
    assert np.array_equal(prob.potential(t), 2.0 / np.cosh(t) ** 2)


def test_recovery_reproduces_r3_potential():
    Q, mismatch = recovered_potential(R3)
    t = np.linspace(-4, 4, 41)
    assert np.max(np.abs(Q(t) - 2.0 / np.cosh(t) ** 2)) <= 1e-6
    assert mismatch <= 1e-6


def test_overlap_consistency_h2xr():
    assert assemble(FamilySpec("h2xr", 1.0), (-1, 1)).recovery_mismatch <= 1e-6


def test_smallest_grid():
    prob = assemble(R3, (-1, 1), N=3)
    assert math.isfinite(lambda1(prob, N=3).lambda1)


def test_bad_intervals():
    with pytest.raises(ValueError):
        SLProblem(R3, 1.0, 1.0, np.ones_like, np.zeros_like)
    with pytest.raises(ValueError):
        assemble(R3, (-1, 1), N=2)
    with pytest.raises(OutOfDomain):
        assemble(FamilySpec("euclid", 1.0, 3), (0.9, 0.5))


def test_r3_examples():
    assert abs(lambda1(assemble(R3, (-XI0, XI0))).lambda1) <= 1e-3
    assert lambda1(assemble(R3, (-XI0 / 2, XI0 / 2))).lambda1 > 0
    assert lambda1(assemble(R3, (-2 * XI0, 2 * XI0))).lambda1 < 0


@settings(max_examples=10, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.05, 1.0))
def test_monotone_under_inclusion(half, grow):
    small = lambda1(assemble(R3, (-half, half)), N=801).lambda1
    large = lambda1(assemble(R3, (-half - grow, half)), N=801).lambda1
    assert large < small


def test_index_on_interval():
    spec = FamilySpec("h2xr", 1.0)
    z = variation_zero(spec)
    assert index_on_interval(assemble(spec, (-0.9 * z, 0.9 * z)), N=1001) == 0
    assert index_on_interval(assemble(spec, (-1.2 * z, 1.05 * z)), N=1001) == 1


def test_full_h3_catenoid_truncated():
    prob, res = spectrum(FamilySpec("h3min", 0.2), (-math.inf, math.inf), truncation_check=True)
    assert prob.truncated_at is not None
    assert res.truncation_shift <= 1e-6
    assert index_on_interval(prob) == 1


def test_ground_state_has_one_sign():
    res = lambda1(assemble(FamilySpec("cousin", 0.5), (-1, 1.5)), N=1001)
    assert np.all(res.eigenvector[1:-1] > 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 40), st.integers(0, 2**31 - 1))
def test_sturm_bisection_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    d, o = rng.normal(size=n), rng.normal(size=n - 1)
    ref = eigvalsh_tridiagonal(d, o)
    assert kth_eigenvalue(d, o, 0) == pytest.approx(ref[0], abs=1e-9)
    x = float(rng.normal())
    assert sturm_count(d, o, x) == int(np.sum(ref < x))


def test_discretization_matches_lapack():
    prob = assemble(FamilySpec("hnxr", 0.5, 3), (-0.6, 0.8))
    _, d, o, _ = discretize(prob, 1001)
    assert kth_eigenvalue(d, o) == pytest.approx(eigvalsh_tridiagonal(d, o, select="i", select_range=(0, 0))[0], abs=1e-8)


def test_horizontal_killing_mode_r3():
    """-cos(theta)/cosh t solves the first angular mode of the R^3 Jacobi equation."""
    Q = _r3_potential(1.0)
    f = lambda t: 1.0 / np.cosh(t)
    t = np.linspace(-5, 5, 41)
    residual = nm.central_diff(f, t, 1e-2, 2) - f(t) + Q(t) * f(t)
    assert np.max(np.abs(residual)) <= 1e-9
