"""Dirichlet spectrum of the radial Jacobi operator.

On an interval ``[lo, hi]`` of the native parameter the operator is
``-(omega f')' - omega Q f`` with mass ``omega``. The potential ``Q`` is
recovered from the closed-form Jacobi fields (``-(omega u')'/(omega u)``),
except for R^3 where the closed form ``2 / (a^2 cosh^2(t/a))`` is used, so the eigenvalue test
is independent of the zero finding in :mod:`lindelof.stability` but checks
the very fields that module uses.

The discretisation is the standard three-point finite-difference form on a
uniform grid with exact half-point weights. Eigenvalues come from Sturm
counts of the symmetrised tridiagonal matrix and bisection.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from . import numerics as nm
from .errors import OutOfDomain, RecoveryMismatch
from .jacobi import JacobiPair, jacobi_pair
from .profiles import FamilySpec

N_DEFAULT = 4001
EIG_TOL = 1e-10
RECOVERY_TOL = 1e-6
TRUNCATION_TOL = 1e-8
S_MAX_CAP = 60.0


@dataclass
class SLProblem:
    spec: FamilySpec
    lo: float
    hi: float
    weight: Callable = field(repr=False)
    potential: Callable = field(repr=False)
    truncated_at: float | None = None
    recovery_mismatch: float = 0.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("empty interval")


@dataclass
class SpectralResult:
    lambda1: float
    s: np.ndarray = field(repr=False)
    eigenvector: np.ndarray = field(repr=False)
    N: int
    s_max: float | None = None
    truncation_shift: float | None = None


# ---------------------------------------------------------------------------
# potential recovery
# ---------------------------------------------------------------------------


def _recover(pair: JacobiPair, u: Callable, s: np.ndarray, h: float) -> np.ndarray:
    """``-(omega u')' / (omega u) = -u''/u - (omega'/omega)(u'/u)``."""
    hs = np.full(s.shape, h)
    if math.isfinite(pair.T):
        hs = np.minimum(hs, (pair.T - np.abs(s)) / 8.0)
    u0 = u(s)
    u1 = nm.central_diff(u, s, hs, 1)
    u2 = nm.central_diff(u, s, hs, 2)
    om = pair.omega(s)
    om1 = nm.central_diff(pair.omega, s, hs, 1)
    return -u2 / u0 - (om1 / om) * (u1 / u0)


def blend_window(pair: JacobiPair, z: float | None) -> tuple[float, float]:
    """Where the recovery switches from ``u = e`` to ``u = v``.

    Nominally ``[0.2, 0.5]`` neck units; shrunk so that ``e`` stays away from
    its zero.
    """
    s0, s1 = 0.2 * pair.profile.neck, 0.5 * pair.profile.neck
    cap = 0.5 * z if z is not None else math.inf
    if math.isfinite(pair.T):
        cap = min(cap, 0.5 * pair.T)
    if s1 > cap:
        s0, s1 = 0.4 * cap, cap
    return s0, s1


def _smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def recovered_potential(spec: FamilySpec, check: bool = True):
    """Potential ``Q`` from the Jacobi fields, and the overlap mismatch."""
    from .stability import variation_zero

    pair = jacobi_pair(spec)
    z = variation_zero(spec)
    s0, s1 = blend_window(pair, z)
    h = 1e-3 * max(pair.profile.neck, 0.1)

    overlap = np.linspace(s0, s1, 25)
    qe = _recover(pair, pair.e, overlap, h)
    qv = _recover(pair, pair.v, overlap, h)
    scale = max(1.0, float(np.max(np.abs(qe))))
    mismatch = float(np.max(np.abs(qe - qv)) / scale)
    if check and mismatch > RECOVERY_TOL:
        raise RecoveryMismatch(f"recoveries from e and v differ by {mismatch:.3g} on [{s0}, {s1}]")

    def Q(s):
        s = np.asarray(s, dtype=float)
        a = np.abs(s)
        chi = _smoothstep((a - s0) / (s1 - s0))
        out = np.empty_like(a)
        near, far = a < s1, a > s0
        qe_ = np.zeros_like(a)
        qv_ = np.zeros_like(a)
        if near.any():
            qe_[near] = _recover(pair, pair.e, a[near], h)
        if far.any():
            qv_[far] = _recover(pair, pair.v, a[far], h)
        out[:] = (1 - chi) * qe_ + chi * qv_
        return out

    return Q, mismatch


def _r3_potential(a):
    def Q(t):
        return 2.0 / (a * a * np.cosh(np.asarray(t) / a) ** 2)

    return Q


def truncation_point(spec: FamilySpec, tol: float = TRUNCATION_TOL) -> float:
    """First ``S`` where ``v`` is within ``tol`` of its limit (capped)."""
    pair = jacobi_pair(spec)
    s = np.concatenate([np.linspace(0.05, 1, 20), np.geomspace(1.0, S_MAX_CAP, 400)])
    if math.isfinite(pair.T):
        s = pair.T * (1.0 - np.geomspace(0.5, 1e-12, 400))
    v = pair.v(s)
    if math.isinf(pair.v_limit):
        # v grows like a multiple of exp(s); test the logarithmic slope instead
        dlog = nm.central_diff(lambda x: np.log(pair.v(x)), s, np.full(s.shape, 1e-3), 1)
        ok = np.abs(dlog - 1.0) <= tol
    else:
        ok = np.abs(v - pair.v_limit) <= tol * max(1.0, abs(pair.v_limit))
    hit = np.nonzero(ok)[0]
    return float(s[hit[0]]) if hit.size else float(s[-1])


def assemble(spec: FamilySpec, interval, N: int = N_DEFAULT, check: bool = True) -> SLProblem:
    """Radial Jacobi problem on ``interval``; infinite ends are truncated."""
    if N < 3:
        raise ValueError("need at least 3 grid points")
    pair = jacobi_pair(spec)
    lo, hi = map(float, interval)
    truncated = None
    if math.isinf(lo) or math.isinf(hi) or abs(lo) >= pair.T or abs(hi) >= pair.T:
        S = truncation_point(spec)
        truncated = S
        lo, hi = max(lo, -S), min(hi, S)
    if not (-pair.T < lo < hi < pair.T):
        raise OutOfDomain(f"interval [{lo}, {hi}] not inside (-T, T)")
    if spec.family == "euclid" and spec.n == 2:
        Q, mismatch = _r3_potential(spec.a), 0.0
    else:
        Q, mismatch = recovered_potential(spec, check=check)
    return SLProblem(spec, lo, hi, pair.omega, Q, truncated, mismatch)


# ---------------------------------------------------------------------------
# tridiagonal eigenproblem
# ---------------------------------------------------------------------------


def discretize(problem: SLProblem, N: int = N_DEFAULT):
    """Symmetric tridiagonal ``(d, o)`` of ``M^{-1/2} K M^{-1/2}`` on interior nodes."""
    s = np.linspace(problem.lo, problem.hi, N)
    h = s[1] - s[0]
    interior = s[1:-1]
    mid = 0.5 * (s[:-1] + s[1:])
    wm = problem.weight(mid)
    wi = problem.weight(interior)
    q = problem.potential(interior)
    diag = (wm[:-1] + wm[1:]) / h**2 - wi * q
    off = -wm[1:-1] / h**2
    # mass is diag(wi); symmetrise
    d = diag / wi
    o = off / np.sqrt(wi[:-1] * wi[1:])
    return s, d, o, wi


def sturm_count(d: np.ndarray, o: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the tridiagonal matrix below ``x``."""
    count = 0
    q = 1.0
    o2 = np.concatenate([[0.0], o * o])
    tiny = np.finfo(float).tiny
    for di, oi2 in zip(d.tolist(), o2.tolist()):
        q = di - x - (oi2 / q if q != 0 else oi2 / tiny)
        if q < 0:
            count += 1
    return count


def _bracket(d, o):
    r = np.abs(np.concatenate([o, [0.0]])) + np.abs(np.concatenate([[0.0], o]))
    return float(np.min(d - r)), float(np.max(d + r))


def kth_eigenvalue(d, o, k: int = 0, tol: float = EIG_TOL) -> float:
    lo, hi = _bracket(d, o)
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)) and hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sturm_count(d, o, mid) > k:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def _ground_state(d, o, lam):
    n = d.size
    shift = lam - 1e-8 * max(1.0, abs(lam))
    ab = np.zeros((3, n))
    ab[0, 1:] = o
    ab[1] = d - shift
    ab[2, :-1] = o
    x = np.ones(n)
    for _ in range(4):
        x = solve_banded((1, 1), ab, x)
        x /= np.linalg.norm(x)
    return x if x[np.argmax(np.abs(x))] > 0 else -x


def lambda1(problem: SLProblem, N: int = N_DEFAULT, with_truncation_check: bool = False) -> SpectralResult:
    s, d, o, wi = discretize(problem, N)
    lam = kth_eigenvalue(d, o, 0)
    y = _ground_state(d, o, lam)
    f = np.concatenate([[0.0], y / np.sqrt(wi), [0.0]])
    f /= np.max(np.abs(f))
    shift = None
    if with_truncation_check and problem.truncated_at is not None:
        S2 = 2.0 * problem.truncated_at
        pair = jacobi_pair(problem.spec)
        if math.isfinite(pair.T):
            S2 = problem.truncated_at + 0.5 * (pair.T - problem.truncated_at)
        lo = -S2 if problem.lo <= -problem.truncated_at else problem.lo
        hi = S2 if problem.hi >= problem.truncated_at else problem.hi
        wider = SLProblem(problem.spec, lo, hi, problem.weight, problem.potential, S2)
        # same spacing, so the shift measures truncation only
        N2 = int(round((hi - lo) / (s[1] - s[0]))) + 1
        _, d2, o2, _ = discretize(wider, N2)
        shift = abs(kth_eigenvalue(d2, o2, 0) - lam)
    return SpectralResult(lam, s, f, N, problem.truncated_at, shift)


def index_on_interval(problem: SLProblem, N: int = N_DEFAULT) -> int:
    _, d, o, _ = discretize(problem, N)
    return sturm_count(d, o, 0.0)


def spectrum(spec: FamilySpec, interval, N: int = N_DEFAULT, truncation_check: bool = False):
    """Convenience: assemble and solve."""
    prob = assemble(spec, interval, N)
    res = lambda1(prob, N, with_truncation_check=truncation_check)
    return prob, res


def write_eigenvector_csv(path, result: SpectralResult, comment=None):
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(["s", "f"])
        for a, b in zip(result.s, result.eigenvector):
            w.writerow([f"{a:.15g}", f"{b:.15g}"])
