"""Numerical kernels: improper quadrature, adaptive ODE integration, root finding.

The adaptive engines come from scipy (QUADPACK, DOP853, Brent); this module
wraps them with the conventions the rest of the package relies on:

* inverse-square-root endpoint singularities are removed by ``x = c + u**2``
  before any adaptive subdivision,
* infinite upper limits are probed by interval doubling so that divergent
  integrals raise :class:`Divergent` instead of returning a large number,
* ODE integration stops cleanly at a blow-up guard.

:class:`CumulativeIntegral` is the workhorse behind the vectorized profile and
Jacobi-field evaluators: a memoized table of Gauss-Legendre panels that gives
``int_0^s g`` for whole arrays of ``s`` at rounding-level accuracy.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo

from .errors import Divergent, NoSignChange, StepUnderflow, TolExceeded

ABS_TOL = 1e-12
REL_TOL = 1e-10
ROOT_TOL = 1e-12
BLOWUP_GUARD = 1e12

# doubling probe for infinite limits
_MAX_DOUBLINGS = 8
_DECAY_RATIO = 0.75


@dataclass(frozen=True)
class Integrand:
    """A real integrand together with its declared endpoint singularities.

    ``singular_at`` lists the finite endpoints where the integrand behaves like
    ``|x - c|**-0.5``; they are the only points where ``func`` may be infinite.
    """

    func: Callable[[float], float]
    singular_at: tuple[float, ...] = ()
    upper_limit: float = math.inf

    def __call__(self, x: float) -> float:
        return self.func(x)


@dataclass(frozen=True)
class Quadrature:
    value: float
    abs_error: float
    evaluations: int


@dataclass
class IvpTrajectory:
    """Nodes of an adaptive ODE solution plus a dense interpolant.

    ``blowup_time`` is set when the state crossed the overflow guard. It is
    extrapolated past the last node to where the solution becomes infinite.
    """

    t: np.ndarray
    y: np.ndarray
    blowup_time: float | None = None
    dense: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __call__(self, t):
        if self.dense is None:
            raise ValueError("trajectory was computed without dense output")
        return self.dense(t)


def _as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


def _quad_finite(f, lo, hi, abs_tol, rel_tol, limit=400):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        value, err, info, *rest = _spi.quad(
            f, lo, hi, epsabs=abs_tol, epsrel=rel_tol, limit=limit, full_output=1
        )
    ier = rest[0] if rest else 0
    if ier == 1 and err > max(abs_tol, rel_tol * abs(value)):
        raise TolExceeded(
            f"quadrature on [{lo}, {hi}] hit the subdivision limit (err={err:.3g})"
        )
    if not math.isfinite(value):
        raise TolExceeded(f"non-finite quadrature value on [{lo}, {hi}]")
    return value, err, info["neval"]


def _desingularize(f, lo, hi, singular):
    """Return a list of (g, u_lo, u_hi) pieces with the sqrt singularities removed."""
    lo_sing = any(math.isclose(lo, c, rel_tol=0, abs_tol=1e-15) for c in singular)
    hi_sing = math.isfinite(hi) and any(
        math.isclose(hi, c, rel_tol=0, abs_tol=1e-15) for c in singular
    )
    if lo_sing and hi_sing:
        mid = 0.5 * (lo + hi)
        return _desingularize(f, lo, mid, (lo,)) + _desingularize(f, mid, hi, (hi,))
    if lo_sing:
        span = hi - lo if math.isfinite(hi) else 1.0
        w = math.sqrt(span)

        def g(u, f=f, lo=lo):
            return 2.0 * u * f(lo + u * u) if u > 0 else 0.0

        # the regularized integrand is finite at u=0 but f itself is not
        g0 = _limit_at_zero(g, w)
        pieces = [(lambda u, g=g, g0=g0: g(u) if u > 0 else g0, 0.0, w)]
        if not math.isfinite(hi):
            pieces.append((f, lo + span, hi))
        return pieces
    if hi_sing:
        w = math.sqrt(hi - lo)

        def g(u, f=f, hi=hi):
            return 2.0 * u * f(hi - u * u) if u > 0 else 0.0

        g0 = _limit_at_zero(g, w)
        return [(lambda u, g=g, g0=g0: g(u) if u > 0 else g0, 0.0, w)]
    return [(f, lo, hi)]


def _limit_at_zero(g, scale):
    # Richardson on two small offsets; only used for the single point u=0
    h = 1e-6 * min(1.0, scale)
    return 2.0 * g(h) - g(2.0 * h)


def _integrate_to_infinity(f, lo, abs_tol, rel_tol):
    start = max(1.0, abs(lo)) if lo >= 0 else 1.0
    x0 = lo
    x1 = lo + start
    total, err, nev = _quad_finite(f, x0, x1, abs_tol, rel_tol)
    chunks = []
    width = start
    decayed = False
    for _ in range(_MAX_DOUBLINGS):
        x0, x1 = x1, x1 + width
        c, e, n = _quad_finite(f, x0, x1, abs_tol, rel_tol)
        total += c
        err += e
        nev += n
        chunks.append(abs(c))
        width *= 2.0
        if abs(c) <= 0.1 * abs_tol:
            decayed = True
            break
        if len(chunks) >= 3:
            r = [chunks[-i] / chunks[-i - 1] if chunks[-i - 1] > 0 else 0.0 for i in (1, 2)]
            if max(r) < _DECAY_RATIO:
                decayed = True
                break
    if not decayed:
        ratios = [b / a for a, b in zip(chunks, chunks[1:]) if a > 0]
        raise Divergent(
            f"doubled-interval contributions do not decay (last ratios {ratios[-3:]})"
        )
    tail, e, n = _quad_finite(f, x1, math.inf, abs_tol, rel_tol)
    return total + tail, err + e, nev + n


def integrate(
    integrand,
    lo: float,
    hi: float = math.inf,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
) -> Quadrature:
    """Integrate over ``[lo, hi]``, with ``hi`` possibly infinite.

    Raises:
        Divergent: the integral over ``[lo, inf)`` does not converge.
        TolExceeded: the subdivision budget was exhausted.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if abs_tol <= 0 or rel_tol <= 0:
        raise ValueError("tolerances must be positive")
    itg = _as_integrand(integrand)
    value = err = 0.0
    nev = 0
    for g, a, b in _desingularize(itg.func, lo, hi, itg.singular_at):
        if math.isinf(b):
            v, e, n = _integrate_to_infinity(g, a, abs_tol, rel_tol)
        else:
            v, e, n = _quad_finite(g, a, b, abs_tol, rel_tol)
        value += v
        err += e
        nev += n
    return Quadrature(value, err, nev)


def solve_ivp(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: Sequence[float],
    t_max: float,
    tol: float = 1e-12,
    guard: float = BLOWUP_GUARD,
) -> IvpTrajectory:
    """Adaptive DOP853 integration from ``t0`` towards ``t_max``.

    Integration halts with ``blowup_time`` set as soon as any state component
    exceeds ``guard`` in magnitude.
    """
    y0 = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(rhs(t0, y0))):
        raise ValueError("rhs is not finite at the initial condition")

    def over_guard(t, y):
        return guard - np.max(np.abs(y))

    over_guard.terminal = True
    sol = _spi.solve_ivp(
        rhs,
        (t0, t_max),
        y0,
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-2,
        events=over_guard,
        dense_output=True,
    )
    blowup = None
    if sol.status == 1:
        blowup = _extrapolate_blowup(rhs, sol, float(sol.t_events[0][0]))
    elif sol.status == -1:
        y_last = sol.y[:, -1]
        if np.max(np.abs(y_last)) > 1e6:
            blowup = _extrapolate_blowup(rhs, sol, float(sol.t[-1]))
        else:
            raise StepUnderflow(sol.message)
    return IvpTrajectory(sol.t.copy(), sol.y.T.copy(), blowup, sol.sol)


def _extrapolate_blowup(rhs, sol, t1: float) -> float:
    """Singular time past the guard crossing ``t1``.

    Near a power-law singularity ``m ~ C (T - t)^-p`` the ratio ``q = m / m'``
    equals ``(T - t) / p``, so ``q`` is linear in ``t`` and vanishes at ``T``.
    Two samples of ``q`` give ``T``; ``t1`` is kept if they are inconsistent.
    """

    def q(t):
        y = sol.sol(t)
        k = int(np.argmax(np.abs(y)))
        dy = np.asarray(rhs(t, y))[k]
        return y[k] / dy if dy != 0 else math.inf

    q1 = q(t1)
    if not (math.isfinite(q1) and q1 > 0):
        return t1
    t0 = t1 - 10.0 * q1
    if t0 <= sol.t[0]:
        return t1
    q0 = q(t0)
    slope = (q0 - q1) / (t1 - t0)
    if not (math.isfinite(slope) and slope > 0):
        return t1
    return t1 + q1 / slope


def find_root(g: Callable[[float], float], lo: float, hi: float, tol: float = ROOT_TOL) -> float:
    """Brent root of ``g`` on a sign-changing bracket ``[lo, hi]``."""
    glo, ghi = g(lo), g(hi)
    if glo == 0.0 and ghi == 0.0:
        return 0.5 * (lo + hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if not (glo < 0) ^ (ghi < 0):
        raise NoSignChange(f"g({lo})={glo:.3g} and g({hi})={ghi:.3g} have the same sign")
    root, res = _spo.brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps,
                            maxiter=500, full_output=True)
    if not res.converged:
        raise NoSignChange(f"Brent iteration did not converge on [{lo}, {hi}]")
    return root


def bracket_sign_change(g, grid) -> tuple[float, float] | None:
    """First consecutive pair of ``grid`` points where ``g`` changes sign."""
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(g(grid), dtype=float)
    s = np.sign(vals)
    idx = np.nonzero(s[:-1] * s[1:] <= 0)[0]
    if idx.size == 0:
        return None
    i = idx[0]
    return float(grid[i]), float(grid[i + 1])


# ---------------------------------------------------------------------------
# memoized Gauss-Legendre panels
# ---------------------------------------------------------------------------

_GL_ORDER = 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


class CumulativeIntegral:
    """``F(s) = int_0^s g(t) dt`` for arrays of ``s >= 0``.

    Panels have width ``h`` up to ``s = uniform_to`` and grow geometrically
    (width ``growth * t``) beyond, so smooth integrands with algebraic or
    exponential tails are resolved at any distance. The panel table is
    extended lazily under a lock; evaluation itself is lock-free.
    """

    def __init__(self, g, h: float = 0.125, uniform_to: float = 8.0, growth: float = 0.1):
        self._g = g
        self._h = h
        self._uniform_to = uniform_to
        self._growth = growth
        self._edges = np.array([0.0])
        self._prefix = np.array([0.0])
        self._lock = threading.Lock()

    def _next_edges(self, start, stop):
        edges = []
        t = start
        while t < stop:
            w = self._h if t < self._uniform_to else self._growth * t
            t = t + w
            edges.append(t)
        return np.array(edges)

    def _extend(self, s_max):
        with self._lock:
            if self._edges[-1] >= s_max:
                return
            new = self._next_edges(self._edges[-1], max(s_max, 2 * self._edges[-1], 1.0))
            left = np.concatenate(([self._edges[-1]], new[:-1]))
            vals = self._panel(left, new)
            prefix = self._prefix[-1] + np.cumsum(vals)
            self._prefix = np.concatenate((self._prefix, prefix))
            self._edges = np.concatenate((self._edges, new))

    def _panel(self, a, b):
        a = np.asarray(a, dtype=float)[..., None]
        b = np.asarray(b, dtype=float)[..., None]
        half = 0.5 * (b - a)
        nodes = a + half * (_GL_X + 1.0)
        return (half[..., 0]) * (self._g(nodes) @ _GL_W)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise ValueError("CumulativeIntegral expects s >= 0")
        smax = float(np.max(s)) if s.size else 0.0
        if smax > self._edges[-1]:
            self._extend(smax)
        edges, prefix = self._edges, self._prefix
        k = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(edges) - 1)
        base = edges[k]
        out = prefix[k] + self._panel(base, s)
        return out if out.ndim else float(out)


def invert_monotone(F, dF, target, lo: float = 0.0, hi: float = 1.0, maxiter: int = 200):
    """Solve ``F(x) = target`` elementwise for increasing ``F`` on ``[lo, hi]``.

    Safeguarded Newton: a step that leaves the current bracket is replaced by
    bisection. Targets outside ``[F(lo), F(hi)]`` end at the nearest bound.
    """
    target = np.asarray(target, dtype=float)
    flat = target.ravel()
    a = np.full(flat.shape, lo, dtype=float)
    b = np.full(flat.shape, hi, dtype=float)
    x = 0.5 * (a + b)
    idx = np.arange(flat.size)
    eps = np.finfo(float).eps
    for _ in range(maxiter):
        if idx.size == 0:
            break
        xi, ai, bi, ti = x[idx], a[idx], b[idx], flat[idx]
        fx = F(xi) - ti
        ai = np.where(fx < 0, xi, ai)
        bi = np.where(fx > 0, xi, bi)
        d = dF(xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xi - fx / d
        bad = ~np.isfinite(xn) | (xn <= ai) | (xn >= bi)
        xn = np.where(bad, 0.5 * (ai + bi), xn)
        small = np.abs(xn - xi) <= 4 * eps * np.maximum(np.abs(xi), 1e-300)
        done = (fx == 0) | small | ((bi - ai) <= 4 * eps * np.maximum(np.abs(bi), 1e-300))
        x[idx] = np.where(fx == 0, xi, xn)
        a[idx], b[idx] = ai, bi
        idx = idx[~done]
    return x.reshape(target.shape)


# 7-point central stencils (sixth order)
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0
_OFFSETS = np.arange(-3, 4)


def central_diff(f, x, h, order: int = 1):
    """Sixth-order central difference of ``f`` at ``x`` (vectorized in ``x`` and ``h``)."""
    x = np.asarray(x, dtype=float)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    coef = {1: _D1, 2: _D2}[order]
    acc = np.zeros_like(x)
    for c, k in zip(coef, _OFFSETS):
        if c != 0.0:
            acc = acc + c * f(x + k * h)
    return acc / h**order
