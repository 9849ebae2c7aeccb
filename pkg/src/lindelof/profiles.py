"""Generating curves of the catenoid families.

Every family has a *native* parameter: the height ``t`` for the graph
families (Euclidean catenoids, catenoids in H^n x R) and arclength ``s`` for
the rotation curves in H^2 x R and H^3. Profiles are centred at the neck
(``height(0) = 0``), have even radius and odd height.

Closed forms and quadratures are authoritative. Each profile also knows the
ODE its curve satisfies; :func:`profile_cross_check` compares the two.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy.special import gamma

from . import numerics as nm
from .errors import OutOfDomain, UnsupportedFamily

FAMILIES = ("euclid", "h2xr", "hnxr", "h3min", "cousin")

_ALIASES = {
    "euclidcatenoid": "euclid",
    "r": "euclid",
    "rn": "euclid",
    "h2r": "h2xr",
    "hnr": "hnxr",
    "h3minimal": "h3min",
    "h3": "h3min",
    "h3cousin": "cousin",
}


@dataclass(frozen=True)
class FamilySpec:
    """Ambient family, surface dimension ``n`` and neck parameter ``a``.

    ``n`` only matters for ``euclid`` and ``hnxr``; the other families are
    surfaces (``n = 2``) and the value is normalised accordingly.
    """

    family: str
    a: float = 1.0
    n: int = 2

    def __post_init__(self):
        fam = self.family.lower().replace("_", "").replace("-", "")
        fam = _ALIASES.get(fam, fam)
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", fam)
        if not (isinstance(self.a, (int, float)) and math.isfinite(self.a) and self.a > 0):
            raise ValueError(f"neck parameter must be a positive real, got {self.a!r}")
        object.__setattr__(self, "a", float(self.a))
        if fam in ("euclid", "hnxr"):
            if int(self.n) != self.n or self.n < 2:
                raise ValueError(f"dimension n must be an integer >= 2, got {self.n!r}")
            object.__setattr__(self, "n", int(self.n))
        else:
            object.__setattr__(self, "n", 2)

    @property
    def is_minimal(self) -> bool:
        return self.family != "cousin"

    def with_a(self, a: float) -> "FamilySpec":
        return FamilySpec(self.family, a, self.n)

    def label(self) -> str:
        if self.family in ("euclid", "hnxr"):
            return f"{self.family}(n={self.n}, a={self.a:g})"
        return f"{self.family}(a={self.a:g})"


def sphere_volume(n: int) -> float:
    """Volume of the unit (n-1)-sphere in R^n."""
    return 2.0 * math.pi ** (n / 2) / gamma(n / 2)


# ---------------------------------------------------------------------------
# small stable helpers
# ---------------------------------------------------------------------------


def _logcosh(x):
    x = np.abs(x)
    return x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)


def _arccosh_from_log(logx):
    """``arccosh(X)`` given ``log X`` (X >= 1), accurate for huge X."""
    logx = np.maximum(logx, 0.0)
    return logx + np.log1p(np.sqrt(-np.expm1(-2.0 * logx)))


def _pow_minus_one(u, m):
    """``(1 + u**2)**m - 1`` without cancellation."""
    return np.expm1(m * np.log1p(u * u))


def _h_ratio(q, m):
    """``((1 + q)**m - 1) / q`` with the q -> 0 limit ``m``."""
    q = np.asarray(q, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.expm1(m * np.log1p(q)) / q
    return np.where(q == 0, float(m), out)


def _as_array(s):
    return np.asarray(s, dtype=float)


def _reshape(out, s):
    return out if np.ndim(s) else float(out)


class _GraphInverse:
    """Height as a function of ``w = radius variable``, via ``w = 1 + u**2``.

    ``g(u)`` is the regularised integrand of ``t(w)``; ``G(r) = g(1/r)/r**2``
    handles the tail. Both are smooth on [0, 1], so the total height
    ``T = int_0^1 g + int_0^1 G`` and the inverse map ``t -> u`` are computed
    from panel tables with Newton polishing.
    """

    def __init__(self, g, G):
        self.g, self.G = g, G
        self.F1 = nm.CumulativeIntegral(g)
        self.F2 = nm.CumulativeIntegral(G)
        self.t_mid = self.F1(1.0)
        self.T = self.t_mid + self.F2(1.0)

    def height(self, u):
        u = _as_array(u)
        with np.errstate(divide="ignore"):
            r = np.where(u > 1, 1.0 / np.maximum(u, 1.0), 1.0)
        low = self.F1(np.minimum(u, 1.0))
        high = self.T - self.F2(r)
        return np.where(u <= 1, low, high)

    def u_of(self, t):
        """Inverse map; returns ``u >= 0`` (``inf`` at ``t = T``)."""
        t = _as_array(t)
        u = np.empty_like(t)
        low = t <= self.t_mid
        if low.any():
            u[low] = nm.invert_monotone(self.F1, self.g, t[low], 0.0, 1.0)
        if (~low).any():
            r = nm.invert_monotone(self.F2, self.G, self.T - t[~low], 0.0, 1.0)
            with np.errstate(divide="ignore"):
                u[~low] = 1.0 / r
        return u


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


class Profile:
    """Generating curve of one catenoid.

    Subclasses implement the curve on ``s >= 0``; this base class applies
    parity and domain checks. ``omega`` is the weight of the radial Jacobi
    operator in the native parameter (area density over the squared speed).
    """

    param_kind = "arclength"
    H = 0.0

    def __init__(self, spec: FamilySpec):
        self.spec = spec

    # subclasses provide the s >= 0 branch
    def _radius(self, s):
        raise NotImplementedError

    def _height(self, s):
        raise NotImplementedError

    def _d_radius(self, s):
        raise NotImplementedError

    def _d_height(self, s):
        raise NotImplementedError

    @property
    def T(self) -> float:
        return math.inf

    @property
    def a(self) -> float:
        return self.spec.a

    @property
    def neck(self) -> float:
        return self.spec.a

    def check_domain(self, s):
        s = _as_array(s)
        if np.any(~np.isfinite(s)) or np.any(np.abs(s) >= self.T):
            raise OutOfDomain(f"parameter outside (-T, T) with T = {self.T}")
        return s

    def radius(self, s):
        s = self.check_domain(s)
        out = np.where(s == 0, self.neck, self._radius(np.abs(s)))
        return _reshape(out, s)

    def height(self, s):
        s = self.check_domain(s)
        return _reshape(np.sign(s) * self._height(np.abs(s)), s)

    def d_radius(self, s):
        s = self.check_domain(s)
        return _reshape(np.sign(s) * self._d_radius(np.abs(s)), s)

    def d_height(self, s):
        s = self.check_domain(s)
        return _reshape(self._d_height(np.abs(s)), s)

    def metric_factor(self, s):
        """Coefficient of ``d_height**2`` in the ambient metric of the profile plane."""
        return np.ones_like(_as_array(s))

    def area_factor(self, r):
        """Radius of the orbit spheres, as a function of the radial coordinate."""
        raise NotImplementedError

    def speed(self, s):
        s = _as_array(s)
        return np.sqrt(self.d_radius(s) ** 2 + self.metric_factor(s) * self.d_height(s) ** 2)

    def omega(self, s):
        s = _as_array(s)
        r = self.radius(s)
        return self.area_factor(r) ** (self.spec.n - 1) / self.speed(s)

    # ODE form of the same curve -------------------------------------------------

    def ode_rhs(self, s, y):
        raise NotImplementedError

    def ode_initial(self):
        raise NotImplementedError

    def ode_radius_height(self, y):
        """(radius, height, d_radius, d_height) from an ODE state."""
        raise NotImplementedError

    def ode_trajectory(self, s_max: float, tol: float = 1e-13) -> nm.IvpTrajectory:
        return nm.solve_ivp(self.ode_rhs, 0.0, self.ode_initial(), s_max, tol=tol)

    def first_integral(self, r, dr, dh):
        """Flux quantity constant along the curve (native parameter)."""
        raise NotImplementedError

    @property
    def flux_constant(self) -> float:
        raise NotImplementedError

    def embed(self, s, theta):
        raise NotImplementedError


class EuclidProfile(Profile):
    """Catenoid in R^{n+1}: radius ``a c_n(t/a)`` over the height ``t``."""

    param_kind = "graph"

    def __init__(self, spec: FamilySpec):
        super().__init__(spec)
        self.m = 2 * spec.n - 2
        if spec.n > 2:
            m = self.m
            n = spec.n

            def g(u):
                return 2.0 / np.sqrt(_h_ratio(u * u, m))

            def G(r):
                r = _as_array(r)
                den = np.sqrt((1.0 + r * r) ** m - r ** (2 * m))
                return 2.0 * r ** (2 * n - 5) / den

            self._inv = _GraphInverse(g, G)

    @cached_property
    def T_unit(self) -> float:
        """Half-height of the unit-neck catenoid (infinite for n = 2)."""
        return math.inf if self.spec.n == 2 else self._inv.T

    @property
    def T(self) -> float:
        return self.a * self.T_unit

    def u_of_tau(self, tau):
        """``u`` with ``c_n(tau) = 1 + u**2`` for ``tau >= 0``."""
        if self.spec.n == 2:
            return np.sqrt(np.cosh(tau) - 1.0)
        return self._inv.u_of(tau)

    def c(self, tau):
        tau = np.abs(_as_array(tau))
        if self.spec.n == 2:
            return np.cosh(tau)
        return 1.0 + self.u_of_tau(tau) ** 2

    def c_prime(self, tau):
        """``c_n'(tau)`` for ``tau >= 0``."""
        tau = _as_array(tau)
        if self.spec.n == 2:
            return np.sinh(tau)
        u = self.u_of_tau(tau)
        return np.sqrt(_pow_minus_one(u, self.m))

    def _radius(self, t):
        return self.a * self.c(t / self.a)

    def _d_radius(self, t):
        return self.c_prime(t / self.a)

    def _height(self, t):
        return t

    def _d_height(self, t):
        return np.ones_like(t)

    def area_factor(self, r):
        return r

    def ode_rhs(self, t, y):
        f, fp = y
        return np.array([fp, (self.spec.n - 1) * (1.0 + fp * fp) / f])

    def ode_initial(self):
        return [self.a, 0.0]

    def ode_radius_height(self, y, t):
        return y[0], t, y[1], np.ones_like(t)

    def first_integral(self, r, dr, dh):
        return r ** (self.spec.n - 1) / np.sqrt(1.0 + (dr / dh) ** 2)

    @property
    def flux_constant(self) -> float:
        return self.a ** (self.spec.n - 1)

    def embed(self, s, theta):
        r = self.radius(s)
        pt = np.zeros(self.spec.n + 1)
        pt[0], pt[1] = r * math.cos(theta), r * math.sin(theta)
        pt[-1] = self.height(s)
        return pt


class H2xRProfile(Profile):
    """Catenoid in H^2 x R, arclength parametrisation."""

    def __init__(self, spec):
        super().__init__(spec)
        a = spec.a
        self._ca, self._sa = math.cosh(a), math.sinh(a)
        self._Lam = nm.CumulativeIntegral(self._lambda_integrand)

    def _u(self, s):
        return np.exp(-_logcosh(s))

    def _lambda_integrand(self, t):
        u = self._u(t)
        return self._sa * u / np.sqrt(self._ca**2 - u * u)

    def _radius(self, s):
        return _arccosh_from_log(math.log(self._ca) + _logcosh(s))

    def _d_radius(self, s):
        u = self._u(s)
        return self._ca * np.tanh(s) / np.sqrt(self._ca**2 - u * u)

    def _height(self, s):
        return self._Lam(s)

    def _d_height(self, s):
        return self._lambda_integrand(s)

    def area_factor(self, r):
        return np.sinh(r)

    def ode_rhs(self, s, y):
        R, _, psi = y
        return np.array([math.cos(psi), math.sin(psi), -math.sin(psi) / math.tanh(R)])

    def ode_initial(self):
        return [self.a, 0.0, math.pi / 2]

    def ode_radius_height(self, y, s):
        return y[0], y[1], np.cos(y[2]), np.sin(y[2])

    def first_integral(self, r, dr, dh):
        return np.sinh(r) * dh

    @property
    def flux_constant(self) -> float:
        return self._sa

    @cached_property
    def vertical_height(self) -> float:
        q = nm.integrate(lambda t: float(self._lambda_integrand(t)), 0.0, math.inf)
        return q.value

    def embed(self, s, theta):
        r = self.radius(s)
        rho = math.tanh(r / 2)
        return np.array([rho * math.cos(theta), rho * math.sin(theta), self.height(s)])


class HnxRProfile(Profile):
    """Catenoid in H^n x R: radius ``f(a, t)`` over the height ``t``."""

    param_kind = "graph"

    def __init__(self, spec):
        super().__init__(spec)
        n, a = spec.n, spec.a
        m = 2 * n - 2
        self.m = m
        sa = math.sinh(a)
        self._sa, self._ca = sa, math.cosh(a)

        def g(u):
            w = 1.0 + u * u
            return 2.0 / np.sqrt(_h_ratio(u * u, m)) * sa / np.sqrt(1.0 + (sa * w) ** 2)

        def G(r):
            r = _as_array(r)
            base = 2.0 * r ** (2 * n - 3) / np.sqrt((1.0 + r * r) ** m - r ** (2 * m))
            return base * sa / np.sqrt(r**4 + (sa * (1.0 + r * r)) ** 2)

        self._inv = _GraphInverse(g, G)

    @property
    def T(self) -> float:
        return self._inv.T

    def u_of(self, t):
        return self._inv.u_of(np.abs(_as_array(t)))

    def _radius(self, t):
        u = self.u_of(t)
        return np.arcsinh(self._sa * (1.0 + u * u))

    def _d_radius(self, t):
        u = self.u_of(t)
        return np.sqrt(_pow_minus_one(u, self.m))

    def _height(self, t):
        return t

    def _d_height(self, t):
        return np.ones_like(t)

    def area_factor(self, r):
        return np.sinh(r)

    def ode_rhs(self, t, y):
        f, fp = y
        return np.array([fp, (self.spec.n - 1) * (1.0 + fp * fp) / math.tanh(f)])

    def ode_initial(self):
        return [self.a, 0.0]

    def ode_radius_height(self, y, t):
        return y[0], t, y[1], np.ones_like(t)

    def first_integral(self, r, dr, dh):
        return np.sinh(r) ** (self.spec.n - 1) / np.sqrt(1.0 + (dr / dh) ** 2)

    @property
    def flux_constant(self) -> float:
        return self._sa ** (self.spec.n - 1)

    def embed(self, s, theta):
        r = self.radius(s)
        rho = math.tanh(r / 2)
        pt = np.zeros(self.spec.n + 1)
        pt[0], pt[1] = rho * math.cos(theta), rho * math.sin(theta)
        pt[-1] = self.height(s)
        return pt


class _H3Profile(Profile):
    """Rotation curve ``(y, Lambda)`` in the Fermi plane of H^3, arclength."""

    def metric_factor(self, s):
        return np.cosh(self.radius(s)) ** 2

    def area_factor(self, r):
        return np.sinh(r)

    def ode_rhs(self, s, y):
        r, _, psi = y
        sp = math.sin(psi)
        return np.array(
            [math.cos(psi), sp / math.cosh(r), 2.0 * self.H - 2.0 * sp / math.tanh(2.0 * r)]
        )

    def ode_initial(self):
        return [self.a, 0.0, math.pi / 2]

    def ode_radius_height(self, y, s):
        return y[0], y[1], np.cos(y[2]), np.sin(y[2]) / np.cosh(y[0])

    def first_integral(self, r, dr, dh):
        flux = dh * np.sinh(r) * np.cosh(r) ** 2
        if self.H == 0:
            return flux
        return 0.5 * np.cosh(2.0 * r) - flux

    def embed(self, s, theta):
        y, lam = self.radius(s), self.height(s)
        scale = math.exp(lam)
        return np.array(
            [
                scale * math.tanh(y) * math.cos(theta),
                scale * math.tanh(y) * math.sin(theta),
                scale / math.cosh(y),
            ]
        )


class H3MinimalProfile(_H3Profile):
    """Minimal catenoid in H^3, ``cosh(2y) = cosh(2a) cosh(2s)``."""

    def __init__(self, spec):
        super().__init__(spec)
        a = spec.a
        self.A = math.cosh(2 * a)
        self._s2a = math.sinh(2 * a)
        self._Lam = nm.CumulativeIntegral(self.j0)

    def u(self, t):
        return np.exp(-_logcosh(2.0 * _as_array(t)))

    def j0(self, t):
        """Integrand of the height, without the sqrt(2) factor."""
        u, A = self.u(t), self.A
        return self._s2a * u**1.5 / ((A + u) * np.sqrt(A - u))

    def _radius(self, s):
        return 0.5 * _arccosh_from_log(math.log(self.A) + _logcosh(2.0 * s))

    def _d_radius(self, s):
        u, A = self.u(s), self.A
        return A * np.tanh(2.0 * s) / np.sqrt(A * A - u * u)

    def _height(self, s):
        return math.sqrt(2.0) * self._Lam(s)

    def _d_height(self, s):
        return math.sqrt(2.0) * self.j0(s)

    @property
    def flux_constant(self) -> float:
        return 0.5 * self._s2a

    @cached_property
    def vertical_height(self) -> float:
        q = nm.integrate(lambda t: float(self.j0(t)), 0.0, math.inf)
        return math.sqrt(2.0) * q.value

    def height_over_radius(self, y):
        """Height of the upper half as a function of the radius ``y >= a``."""
        y = _as_array(y)
        if np.any(y < self.a):
            raise OutOfDomain("radius below the neck")
        logx = np.log(np.cosh(2.0 * y)) - math.log(self.A)
        s = 0.5 * _arccosh_from_log(logx)
        return self._height(s)


class H3CousinProfile(_H3Profile):
    """Embedded catenoid cousin (constant mean curvature one) in H^3."""

    H = 1.0

    def __init__(self, spec):
        super().__init__(spec)
        a = spec.a
        self._e2 = math.exp(-2 * a)
        self._Lam = nm.CumulativeIntegral(self.lambda_integrand)

    def lambda_integrand(self, t):
        a = self.a
        t2 = _as_array(t) ** 2
        A1 = 2 * math.exp(a) * t2 + math.exp(3 * a) * math.sinh(2 * a)
        A2 = t2 + math.exp(2 * a) * math.cosh(a) ** 2
        A3 = t2 + math.exp(2 * a) * math.sinh(a) ** 2
        return A1 / (2.0 * A2 * np.sqrt(A3))

    def _X(self, s):
        return 2.0 * self._e2 * s * s + math.cosh(2 * self.a)

    def _radius(self, s):
        return 0.5 * np.arccosh(self._X(s))

    def _d_radius(self, s):
        X = self._X(s)
        return 2.0 * self._e2 * s / np.sqrt((X - 1.0) * (X + 1.0))

    def _height(self, s):
        return self._Lam(s)

    def _d_height(self, s):
        return self.lambda_integrand(s)

    @property
    def flux_constant(self) -> float:
        return 0.5 * self._e2


_CLASSES = {
    "euclid": EuclidProfile,
    "h2xr": H2xRProfile,
    "hnxr": HnxRProfile,
    "h3min": H3MinimalProfile,
    "cousin": H3CousinProfile,
}


def build_profile(spec: FamilySpec) -> Profile:
    return _CLASSES[spec.family](spec)


def scale_profile(p: Profile, k: float) -> Profile:
    """Homothety of a Euclidean catenoid by ``k``."""
    if not isinstance(p, EuclidProfile):
        raise UnsupportedFamily("only Euclidean catenoids are invariant under scaling")
    if not k > 0:
        raise ValueError("scale factor must be positive")
    if k == 1:
        return p
    return EuclidProfile(p.spec.with_a(p.a * k))


def ode_profile(p: Profile, grid, tol: float = 1e-13):
    """Radius, height and their derivatives from the ODE, sampled on ``grid``.

    The curve is integrated from the neck; negative parameters use parity.
    """
    grid = _as_array(grid)
    sa = np.abs(grid)
    smax = float(np.max(sa)) if grid.size else 0.0
    if smax == 0:
        ys = np.repeat(np.asarray(p.ode_initial(), dtype=float)[:, None], grid.size, axis=1)
        ys = ys.reshape((-1,) + grid.shape)
    else:
        traj = p.ode_trajectory(smax * (1 + 1e-12), tol=tol)
        if traj.blowup_time is not None and traj.t[-1] < smax:
            raise OutOfDomain(f"ODE solution blows up near {traj.blowup_time:.15g} before {smax}")
        ys = traj(sa)
    r, h, dr, dh = p.ode_radius_height(ys, sa)
    out = np.zeros((4,) + grid.shape)
    sgn = np.sign(grid)
    out[0] = np.where(grid == 0, p.neck, r)
    out[1] = sgn * h
    out[2] = sgn * dr
    out[3] = dh
    return out


def profile_cross_check(spec: FamilySpec, grid) -> float:
    """Largest radius discrepancy between closed form and ODE on ``grid``."""
    p = build_profile(spec)
    grid = _as_array(grid)
    closed = p.radius(grid)
    ode = ode_profile(p, grid)[0]
    return float(np.max(np.abs(closed - ode))) if grid.size else 0.0


def embed(spec: FamilySpec, s: float, theta: float):
    p = build_profile(spec)
    p.check_domain(s)
    return p.embed(s, theta)


def heights(spec: FamilySpec):
    """Vertical height ``V`` (and x-height ``X`` for H^3 catenoids)."""
    p = build_profile(spec)
    if spec.family == "h3min":
        V = p.vertical_height
        return V, math.exp(V)
    if spec.family == "h2xr":
        return p.vertical_height, None
    if spec.family == "hnxr" or (spec.family == "euclid" and spec.n > 2):
        return p.T, None
    raise UnsupportedFamily(f"{spec.label()} has infinite vertical height")


def profile_table(p: Profile, grid) -> np.ndarray:
    grid = _as_array(grid)
    return np.column_stack([grid, p.radius(grid), p.height(grid), p.d_radius(grid), p.d_height(grid)])


def mesh_table(p: Profile, grid, n_theta: int = 24) -> list[list[float]]:
    rows = []
    for s in _as_array(grid):
        for k in range(n_theta):
            th = 2 * math.pi * k / n_theta
            rows.append([float(s), th, *map(float, p.embed(s, th))])
    return rows


def default_grid(p: Profile, n_points: int = 201, span: float | None = None) -> np.ndarray:
    """Symmetric sample grid; 95 % of the half-length for finite profiles."""
    if span is None:
        span = 0.95 * p.T if math.isfinite(p.T) else 5.0
    return np.linspace(-span, span, n_points)


def write_rows(path, header: Iterable[str], rows, comment: str | None = None):
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(list(header))
        for row in rows:
            w.writerow([f"{x:.15g}" if isinstance(x, float) else x for x in row])
