"""Vertical and variation Jacobi fields of the catenoid families.

``v`` is the normal component of the axial Killing field and is odd; ``e``
is the normal component of the derivative of the family in the neck
parameter and is even. Each family keeps the sign of ``e`` used by its own
closed form, so ``e(0)`` is ``+1`` for R^3, H^2 x R and minimal H^3
catenoids and ``-1`` otherwise. :meth:`JacobiPair.normalized_e` removes the
ambiguity when families are compared.

The ratio ``L = lim e/v`` at the end of the parameter domain drives the
stability logic downstream: it is finite (a number built from ``T_n`` or the
tail integral ``E``) or infinite with a definite sign.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import numerics as nm
from .errors import Divergent, OutOfDomain, UnsupportedFamily
from .profiles import (
    EuclidProfile,
    FamilySpec,
    H2xRProfile,
    H3CousinProfile,
    H3MinimalProfile,
    HnxRProfile,
    Profile,
    _as_array,
    _h_ratio,
    _pow_minus_one,
    build_profile,
)


@dataclass(frozen=True)
class TailIntegral:
    spec: FamilySpec
    value: float
    convergent: bool = True


@dataclass(frozen=True)
class JacobiPair:
    """Closed-form radial Jacobi fields of one catenoid.

    ``ratio_limit`` is ``lim e/v`` at ``T``; ``dv``/``de`` are analytic
    derivatives when the closed forms are simple enough to differentiate.
    """

    spec: FamilySpec
    profile: Profile = field(repr=False)
    v_pos: Callable = field(repr=False)
    e_pos: Callable = field(repr=False)
    v_limit: float
    e_limit: float
    ratio_limit: float
    e_at_neck: float
    dv: Callable | None = field(default=None, repr=False)
    de: Callable | None = field(default=None, repr=False)

    @property
    def T(self) -> float:
        return self.profile.T

    def v(self, s):
        s = self.profile.check_domain(s)
        out = np.sign(s) * self.v_pos(np.abs(s))
        return out if np.ndim(s) else float(out)

    def e(self, s):
        s = self.profile.check_domain(s)
        out = self.e_pos(np.abs(s))
        return out if np.ndim(s) else float(out)

    def normalized_e(self, s):
        """``e`` rescaled so that its value at the neck is ``-1``."""
        return -self.e(s) / self.e_at_neck

    def omega(self, s):
        return self.profile.omega(s)

    def d_omega(self, s, h=None):
        return _fd(self.profile.omega, s, self.profile, h)

    def d_v(self, s, h=None):
        if self.dv is not None:
            return self.dv(_as_array(s))
        return _fd(self.v, s, self.profile, h)

    def d_e(self, s, h=None):
        if self.de is not None:
            return self.de(_as_array(s))
        return _fd(self.e, s, self.profile, h)

    def combined(self, alpha: float):
        return combined_field(self, alpha)


def _fd_step(p: Profile, s, h=None):
    """Stencil width: ``1e-3`` neck units, shrunk near a finite endpoint."""
    s = _as_array(s)
    base = 1e-3 * max(p.neck, 0.1) if h is None else h
    step = np.full(s.shape, base)
    if math.isfinite(p.T):
        step = np.minimum(step, (p.T - np.abs(s)) / 8.0)
    return step


def _fd(f, s, p, h=None, order=1):
    s = _as_array(s)
    return nm.central_diff(f, s, _fd_step(p, s, h), order)


# ---------------------------------------------------------------------------
# per-family fields
# ---------------------------------------------------------------------------


def _euclid_pair(spec, p: EuclidProfile) -> JacobiPair:
    n, a = spec.n, spec.a
    if n == 2:
        def v_pos(t):
            return np.tanh(t / a)

        def e_pos(t):
            tau = t / a
            return 1.0 - tau * np.tanh(tau)

        def dv(t):
            return 1.0 / (a * np.cosh(t / a) ** 2)

        def de(t):
            tau = t / a
            return -(np.tanh(tau) + tau / np.cosh(tau) ** 2) / a

        return JacobiPair(spec, p, v_pos, e_pos, 1.0, -math.inf, -math.inf, 1.0, dv, de)

    m = 2 * n - 2

    def v_pos(t):
        u = p.u_of_tau(t / a)
        return np.sqrt(-np.expm1(-m * np.log1p(u * u)))

    def e_pos(t):
        tau = t / a
        u = p.u_of_tau(tau)
        c = 1.0 + u * u
        v = np.sqrt(-np.expm1(-m * np.log1p(u * u)))
        return -(c ** (2.0 - n)) + tau * v

    Tn = p.T_unit
    return JacobiPair(spec, p, v_pos, e_pos, 1.0, Tn, Tn, -1.0)


def _h2xr_pair(spec, p: H2xRProfile) -> JacobiPair:
    a = spec.a
    ca, sa = math.cosh(a), math.sinh(a)

    def B(t):
        u = 1.0 / np.cosh(np.minimum(_as_array(t), 700.0))
        return ca * (1.0 - u * u) * u / (ca * ca - u * u) ** 1.5

    IB = nm.CumulativeIntegral(B)

    def e_pos(s):
        u = 1.0 / np.cosh(np.minimum(s, 700.0))
        f = sa * sa * u / (ca * ca - u * u)
        return f - p._d_radius(s) * IB(s)

    E = tail_integral(spec).value
    return JacobiPair(spec, p, p._d_radius, e_pos, 1.0, -E, -E, 1.0)


def _hnxr_pair(spec, p: HnxRProfile) -> JacobiPair:
    n, a = spec.n, spec.a
    m = 2 * n - 2
    sa, ca = math.sinh(a), math.cosh(a)

    def g1(u):
        w = 1.0 + u * u
        return 2.0 / np.sqrt(_h_ratio(u * u, m)) * ca / (1.0 + (sa * w) ** 2) ** 1.5

    def G1(r):
        r = _as_array(r)
        base = 2.0 * r ** (2 * n + 1) / np.sqrt((1.0 + r * r) ** m - r ** (2 * m))
        return base * ca / (r**4 + (sa * (1.0 + r * r)) ** 2) ** 1.5

    F1 = nm.CumulativeIntegral(g1)
    F2 = nm.CumulativeIntegral(G1)
    E = F1(1.0) + F2(1.0)

    def e1(u):
        with np.errstate(divide="ignore"):
            r = np.where(u > 1, 1.0 / np.maximum(u, 1.0), 1.0)
        return np.where(u <= 1, F1(np.minimum(u, 1.0)), E - F2(r))

    def v_pos(t):
        u = p.u_of(t)
        return np.sqrt(-np.expm1(-m * np.log1p(u * u)))

    def e_pos(t):
        u = p.u_of(t)
        w = 1.0 + u * u
        v = np.sqrt(-np.expm1(-m * np.log1p(u * u)))
        cf = np.cosh(np.arcsinh(sa * w))
        e0 = ca / cf * w ** (2.0 - n)
        return -e0 + v * e1(u)

    return JacobiPair(spec, p, v_pos, e_pos, 1.0, E, E, -1.0)


def i0_integrand(a, t):
    """Derivative in ``a`` of the height integrand of minimal H^3 catenoids.

    Written with ``u = 1/cosh(2t)`` so that it stays finite for large ``t``.
    """
    A = math.cosh(2 * a)
    t = _as_array(t)
    with np.errstate(over="ignore"):
        u = 1.0 / np.cosh(2.0 * t)
    num = A * (3.0 - A * A) + (A * A - 1.0) * u - 2.0 * A * u * u
    return num / ((A + u) ** 2 * (A - u) ** 1.5) * u**1.5


def _h3min_pair(spec, p: H3MinimalProfile) -> JacobiPair:
    a = spec.a
    A = math.cosh(2 * a)
    s2 = math.sinh(2 * a) ** 2
    II = nm.CumulativeIntegral(lambda t: i0_integrand(a, t))

    def v_pos(s):
        return A * np.sinh(2 * s) / np.sqrt(A * np.cosh(2 * s) - 1.0)

    def e_pos(s):
        u = p.u(s)
        f0 = s2 * u / (A * A - u * u)
        return f0 - v_pos(s) * II(s)

    E0 = tail_integral(spec).value
    e_lim = 0.0 if E0 == 0 else -math.copysign(math.inf, E0)
    return JacobiPair(spec, p, v_pos, e_pos, math.inf, e_lim, -E0, 1.0)


def cousin_integrands(a):
    """The two pieces ``B`` and ``C`` of the a-derivative of the cousin height integrand."""
    ea, e2a, e3a = math.exp(a), math.exp(2 * a), math.exp(3 * a)
    ch, sh = math.cosh(a), math.sinh(a)
    B2 = 2 * e2a * ch * ch + 2 * e2a * ch * sh
    B3 = 2 * e2a * sh * sh + 2 * e2a * sh * ch

    def parts(t):
        t2 = _as_array(t) ** 2
        A1 = 2 * ea * t2 + e3a * math.sinh(2 * a)
        A2 = t2 + e2a * ch * ch
        A3 = t2 + e2a * sh * sh
        A1a = 2 * ea * t2 + e3a * (3 * math.sinh(2 * a) + 2 * math.cosh(2 * a))
        B = A1a / (2 * A2 * np.sqrt(A3))
        C = A1 * B2 / (2 * A2**2 * np.sqrt(A3)) + A1 * B3 / (4 * A2 * A3**1.5)
        return B, C

    return (lambda t: parts(t)[0]), (lambda t: parts(t)[1])


def _cousin_pair(spec, p: H3CousinProfile) -> JacobiPair:
    a = spec.a
    e2a = math.exp(2 * a)
    ch2, sh2 = math.cosh(a) ** 2, math.sinh(a) ** 2
    B, C = cousin_integrands(a)
    IB = nm.CumulativeIntegral(B)
    IC = nm.CumulativeIntegral(C)

    def v_pos(s):
        return math.exp(-a) * s / np.sqrt(s * s + e2a * sh2)

    def e_pos(s):
        s4 = s**4
        R = -(e2a**2 * sh2 * ch2 - s4) / ((s * s + e2a * ch2) * (s * s + e2a * sh2))
        v = v_pos(s)
        return R - v * IC(s) + v * IB(s)

    return JacobiPair(spec, p, v_pos, e_pos, math.exp(-a), math.inf, math.inf, -1.0)


_BUILDERS = {
    "euclid": _euclid_pair,
    "h2xr": _h2xr_pair,
    "hnxr": _hnxr_pair,
    "h3min": _h3min_pair,
    "cousin": _cousin_pair,
}


@lru_cache(maxsize=256)
def jacobi_pair(spec: FamilySpec) -> JacobiPair:
    """Jacobi fields of ``spec``; cached because profile tables are reusable."""
    return _BUILDERS[spec.family](spec, build_profile(spec))


def combined_field(pair: JacobiPair, alpha: float):
    """``w(s) = v(alpha) e(s) + e(alpha) v(s)``, the radial field vanishing at ``-alpha``."""
    if not 0 < alpha < pair.T:
        raise OutOfDomain(f"alpha={alpha} outside (0, {pair.T})")
    va, ea = pair.v(alpha), pair.e(alpha)

    def w(s):
        return va * pair.e(s) + ea * pair.v(s)

    return w


@lru_cache(maxsize=256)
def tail_integral(spec: FamilySpec) -> TailIntegral:
    """``E(a)``: the limit that fixes the sign of ``e`` at the far end."""
    a = spec.a
    if spec.family == "h2xr":
        ca = math.cosh(a)

        def B(t):
            u = 1.0 / math.cosh(min(t, 700.0))
            return ca * (1.0 - u * u) * u / (ca * ca - u * u) ** 1.5

        return TailIntegral(spec, nm.integrate(B, 0.0).value)
    if spec.family == "hnxr":
        m = 2 * spec.n - 2
        sa2, ca = math.sinh(a) ** 2, math.cosh(a)

        def f(w):
            return ca * (w**m - 1.0) ** -0.5 * (sa2 * w * w + 1.0) ** -1.5

        return TailIntegral(spec, nm.integrate(nm.Integrand(f, (1.0,)), 1.0).value)
    if spec.family == "h3min":
        return TailIntegral(spec, nm.integrate(lambda t: float(i0_integrand(a, t)), 0.0).value)
    if spec.family == "cousin":
        B, _ = cousin_integrands(a)
        try:
            q = nm.integrate(lambda t: float(B(t)), 0.0)
        except Divergent:
            return TailIntegral(spec, math.inf, convergent=False)
        return TailIntegral(spec, q.value)
    raise UnsupportedFamily("Euclidean catenoids use T_n in place of a tail integral")


def wronskian(pair: JacobiPair, s, h=None):
    """``omega (v e' - e v')`` on ``s``."""
    s = _as_array(s)
    return pair.omega(s) * (pair.v(s) * pair.d_e(s, h) - pair.e(s) * pair.d_v(s, h))


def wronskian_deviation(spec: FamilySpec, grid, s_ref: float | None = None) -> float:
    pair = jacobi_pair(spec)
    grid = _as_array(grid)
    W = wronskian(pair, grid)
    ref = float(wronskian(pair, np.array([grid[0] if s_ref is None else s_ref]))[0])
    return float(np.max(np.abs(W - ref)) / abs(ref))


def standard_grid(spec: FamilySpec, n_points: int = 41) -> np.ndarray:
    """Sample points used by the conservation checks: inside 90 % of ``T`` or up to 5."""
    p = jacobi_pair(spec).profile
    span = 0.9 * p.T if math.isfinite(p.T) else 5.0
    return np.linspace(-span, span, n_points)


def _normal_variation(spec: FamilySpec, s, delta: float):
    """Normal component of the central-difference derivative of the family in ``a``."""
    p = build_profile(spec)
    plus, minus = build_profile(spec.with_a(spec.a + delta)), build_profile(spec.with_a(spec.a - delta))
    r_a = (plus.radius(s) - minus.radius(s)) / (2 * delta)
    h_a = (plus.height(s) - minus.height(s)) / (2 * delta)
    r_s, h_s = p.d_radius(s), p.d_height(s)
    G = np.sqrt(p.metric_factor(s))
    return G * (h_a * r_s - r_a * h_s) / p.speed(s)


@dataclass(frozen=True)
class VariationCheck:
    deviation: float
    scale: float


def variation_fd_check(spec: FamilySpec, grid, delta: float = 1e-5) -> VariationCheck:
    """Compare ``e`` with the finite-difference normal variation of the family.

    ``scale`` is the fitted factor ``e_fd = scale * e`` (read off at the neck);
    ``deviation`` is ``max |e_fd - scale e| / max |e|`` over ``grid``.
    """
    pair = jacobi_pair(spec)
    grid = _as_array(grid)
    if math.isfinite(pair.T):
        p = pair.profile
        # the neighbours must still contain the grid
        t_min = min(build_profile(spec.with_a(spec.a - delta)).T, p.T)
        if np.any(np.abs(grid) >= t_min):
            raise OutOfDomain("grid reaches the end of a neighbouring profile")
    e = pair.e(grid)
    efd = _normal_variation(spec, grid, delta)
    scale = float(_normal_variation(spec, np.array([0.0]), delta)[0] / pair.e(0.0))
    dev = float(np.max(np.abs(efd - scale * e)) / np.max(np.abs(e)))
    return VariationCheck(dev, scale)


def write_fields_csv(path, pair: JacobiPair, grid, alpha: float | None = None, comment=None):
    grid = _as_array(grid)
    w = combined_field(pair, alpha)(grid) if alpha is not None else np.full(grid.shape, np.nan)
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        out = csv.writer(fh)
        out.writerow(["s", "v", "e", "w"])
        for row in zip(grid, pair.v(grid), pair.e(grid), w):
            out.writerow([f"{x:.15g}" for x in row])
