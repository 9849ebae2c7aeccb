"""Stability of rotation-invariant catenoid domains.

Every radial Jacobi field has at most one zero on each side of the neck, so
the maximal stable domains are read off from zeros of combinations of ``v``
and ``e``:

* ``z``: zero of ``e``; ``[-z, z]`` is the symmetric maximal domain,
* ``ell``: zero of ``y = e + L v`` with ``L = lim e/v``; when it exists the
  half-catenoid is not maximal and ``[-ell, T)`` is,
* ``beta(alpha)``: zero of ``w = v(alpha) e + e(alpha) v``, the far end of the
  maximal domain starting at ``-alpha``.

The H^3 specific material (second fundamental form, the x-height, the
do Carmo-Dajczer and Mori criteria, intersections of catenaries) lives at the
end of the module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from . import numerics as nm
from .errors import IdenticalCurves, NumericalError, OutOfDomain, UnsupportedFamily
from .jacobi import JacobiPair, i0_integrand, jacobi_pair, tail_integral
from .profiles import EuclidProfile, FamilySpec, H3MinimalProfile, build_profile

# threshold constants with closed forms
A1_COSH2_SQ = (11.0 + 8.0 * math.sqrt(2.0)) / 7.0
A_ONE = 0.5 * math.acosh(math.sqrt(A1_COSH2_SQ))
A_MORI = math.acosh(3.0)

_SCAN_PER_UNIT = 64
_S_CAP = 64.0


@dataclass(frozen=True)
class DomainSpec:
    lower: float
    upper: float
    rotationally_symmetric: bool = True

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty domain [{self.lower}, {self.upper}]")


@dataclass
class StabilityReport:
    spec: FamilySpec
    index: int
    E_value: float | None
    z: float | None
    ell: float | None
    lindelof: bool
    notes: list[str] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.spec.family,
            "n": self.spec.n,
            "a": self.spec.a,
            "index": self.index,
            "E": self.E_value,
            "z": self.z,
            "ell": self.ell,
            "lindelof": self.lindelof,
            "certificates": self.certificates,
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# zero finding along the profile
# ---------------------------------------------------------------------------


def _scan_grid(T: float, s_cap: float = _S_CAP) -> np.ndarray:
    """Points in (0, T) for sign scans: dense near 0, geometric towards T or outward."""
    if math.isfinite(T):
        k = np.arange(1, 41)
        tail = T * (1.0 - 2.0 ** -(k / 2.0))
        tail = tail[tail < T * (1 - 1e-6)]
        body = np.linspace(0.0, T, 400)[1:-1]
        return np.unique(np.concatenate([body, tail]))
    pts = [np.linspace(0.0, 1.0, _SCAN_PER_UNIT + 1)[1:]]
    lo = 1.0
    while lo < s_cap:
        pts.append(np.linspace(lo, 2 * lo, _SCAN_PER_UNIT + 1)[1:])
        lo *= 2
    return np.concatenate(pts)


def _first_zero(g, T: float, limit_sign: float, what: str) -> float | None:
    """First positive zero of ``g`` on (0, T), or None.

    Absence requires that ``g`` keeps its sign on the scan grid and that the
    sign agrees with ``limit_sign``, the known sign of ``g`` near ``T``.
    """
    grid = _scan_grid(T)
    vals = g(grid)
    sgn = np.sign(vals)
    idx = np.nonzero(sgn[:-1] * sgn[1:] <= 0)[0]
    if idx.size:
        i = idx[0]
        if sgn[i] == 0:
            return float(grid[i])
        return nm.find_root(lambda s: float(g(np.array([s]))[0]), grid[i], grid[i + 1])
    if limit_sign != 0 and np.sign(limit_sign) != sgn[-1]:
        raise NumericalError(f"{what}: no sign change found before the scan limit")
    return None


def variation_zero(spec: FamilySpec) -> float | None:
    """Positive zero ``z`` of the variation field."""
    pair = jacobi_pair(spec)
    lim = pair.ratio_limit * (1.0 if math.isinf(pair.v_limit) else pair.v_limit)
    if pair.spec.family == "h3min" and pair.ratio_limit == 0:
        lim = 1.0  # E0 = 0: e decays like a positive exponential
    return _first_zero(pair.e_pos, pair.T, lim, "zero of e")


def _threshold_field(pair: JacobiPair):
    L = pair.ratio_limit

    def y(s):
        return pair.e_pos(s) + L * pair.v_pos(s)

    return y


def half_vertical_threshold(spec: FamilySpec) -> float | None:
    """Zero ``ell`` of ``e + L v``; None when ``L`` is infinite or no zero exists."""
    pair = jacobi_pair(spec)
    L = pair.ratio_limit
    if math.isinf(L):
        return None
    # sign of y near T is that of 2L (times v > 0)
    return _first_zero(_threshold_field(pair), pair.T, L if L != 0 else pair.e_at_neck, "threshold")


def beta_exists(pair: JacobiPair, alpha: float) -> bool:
    """Whether ``w(alpha, .)`` has a zero in (0, T)."""
    L = pair.ratio_limit
    if math.isinf(L):
        return np.sign(L) != np.sign(pair.e_at_neck)
    y_alpha = pair.e(alpha) + L * pair.v(alpha)
    return bool(np.sign(y_alpha) != np.sign(pair.e_at_neck) and y_alpha != 0)


def conjugate_point(spec: FamilySpec, alpha: float) -> float | None:
    """``beta(alpha)``: far end of the maximal stable domain starting at ``-alpha``."""
    pair = jacobi_pair(spec)
    if not 0 < alpha < pair.T:
        raise OutOfDomain(f"alpha={alpha} outside (0, {pair.T})")
    if not beta_exists(pair, alpha):
        return None
    va, ea = pair.v(alpha), pair.e(alpha)
    if ea == 0:
        return alpha

    def w(s):
        return va * pair.e_pos(s) + ea * pair.v_pos(s)

    L = pair.ratio_limit
    # sign of w/v near T
    lim = va * L + ea if math.isfinite(L) else L
    return _first_zero(w, pair.T, lim, "conjugate point")


def tangent_residual(spec: FamilySpec, alpha: float, beta: float) -> float:
    """``alpha + beta - f(alpha)/f'(alpha) - f(beta)/f'(beta)`` for Euclidean profiles."""
    if spec.family != "euclid":
        raise UnsupportedFamily("the tangent construction is Euclidean")
    p = build_profile(spec)
    x = np.array([alpha, beta], dtype=float)
    ratio = p.radius(x) / p.d_radius(x)
    return float(alpha + beta - ratio.sum())


@dataclass(frozen=True)
class Envelope:
    slope: float
    z: float
    c_z: float


def envelope_cone(n: int) -> Envelope:
    """Cone touched by the catenoids ``a c_n(t/a)``: height over radius is ``z / c_n(z)``."""
    spec = FamilySpec("euclid", 1.0, n)
    z = variation_zero(spec)
    cz = float(build_profile(spec).radius(z))
    return Envelope(z / cz, z, cz)


def envelope_fit(n: int, heights=(0.5, 1.0, 1.5, 2.0)) -> float:
    """Slope of the envelope by brute force: minimise the radius over ``a`` at fixed height."""
    unit = build_profile(FamilySpec("euclid", 1.0, n))
    T = unit.T
    radii = []
    for h in heights:
        lo = h / T * (1 + 1e-9) if math.isfinite(T) else h / 50.0

        def rad(a):
            return a * float(unit.c(h / a))

        res = minimize_scalar(rad, bounds=(lo, 20.0 * h), method="bounded",
                              options={"xatol": 1e-12, "maxiter": 500})
        radii.append(res.fun)
    h = np.asarray(heights)
    r = np.asarray(radii)
    # least-squares line through the origin, radius = h / slope
    return float(h @ h / (h @ r))


def _index(spec: FamilySpec, E: float | None) -> int:
    if spec.family == "h3min":
        return 1 if E > 0 else 0
    return 1


def classify(spec: FamilySpec) -> StabilityReport:
    pair = jacobi_pair(spec)
    notes, certs = [], []
    E = None
    if spec.family in ("h2xr", "hnxr", "h3min"):
        E = tail_integral(spec).value
    elif spec.family == "euclid" and spec.n > 2:
        E = pair.ratio_limit
        notes.append("E reports T_n, the limit of e/v")
    index = _index(spec, E)
    z = variation_zero(spec)
    ell = half_vertical_threshold(spec)
    lindelof = index == 1 and ell is None
    certs.append({"kind": "limit_ratio", "value": _num(pair.ratio_limit)})
    if spec.family == "h3min":
        certs.append({"kind": "sign_E0", "value": E, "verdict": "index 1" if E > 0 else "stable"})
        if spec.a >= A_ONE:
            certs.append({"kind": "integrand_sign", "verdict": "stable", "a1": A_ONE})
        sup = mori_sup(spec.a)
        certs.append({"kind": "mori", "sup_A2": sup, "holds": sup <= 2.25,
                      "verdict": "stable" if sup <= 2.25 else "inconclusive"})
        cd = cd_functional(spec.a)
        certs.append({"kind": "do_carmo_dajczer", "value": cd,
                      "verdict": "unstable" if cd > 0 else "inconclusive"})
    if z is not None:
        notes.append("[-z, z] is a maximal weakly stable domain")
    if ell is not None:
        notes.append("[-ell, T) is maximal; the half-catenoid is not")
    if lindelof:
        notes.append("half-catenoids are maximal weakly stable domains")
    return StabilityReport(spec, index, E, z, ell, lindelof, notes, certs)


def _num(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


# ---------------------------------------------------------------------------
# minimal catenoids in H^3
# ---------------------------------------------------------------------------


def E0(a: float) -> float:
    return tail_integral(FamilySpec("h3min", a)).value


def a0(lo: float = 0.3, hi: float = 0.7, tol: float = 1e-12) -> float:
    """Unique sign change of ``E0``."""
    return nm.find_root(E0, lo, hi, tol)


@lru_cache(maxsize=512)
def V0(a: float) -> float:
    return build_profile(FamilySpec("h3min", a)).vertical_height


def X0(a: float) -> float:
    return math.exp(V0(a))


def vheight_consistency(a: float, delta: float = 1e-4) -> float:
    """``|V0'(a) - sqrt(2) E0(a)|`` with a central difference for ``V0'``."""
    fd = (V0(a + delta) - V0(a - delta)) / (2 * delta)
    return abs(fd - math.sqrt(2.0) * E0(a))


@dataclass(frozen=True)
class Intersection:
    count: int
    radii: tuple[float, ...] = ()
    heights: tuple[float, ...] = ()


def intersect_catenaries(a1: float, a2: float) -> Intersection:
    """Intersections of the minimal catenaries with necks ``a1 < a2``."""
    if a1 == a2:
        raise IdenticalCurves("the two catenaries coincide")
    if a1 > a2:
        a1, a2 = a2, a1
    p1 = build_profile(FamilySpec("h3min", a1))
    p2 = build_profile(FamilySpec("h3min", a2))

    def d(y):
        return p2.height_over_radius(y) - p1.height_over_radius(y)

    limit = V0(a2) - V0(a1)
    y = a2 + np.concatenate([np.linspace(0, 1, 200)[1:], np.geomspace(1, 40, 200)[1:]])
    vals = d(y)
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if idx.size == 0:
        if np.sign(vals[-1]) != np.sign(limit) and abs(limit) > 1e-12:
            raise NumericalError("intersection lies beyond the scanned radii")
        return Intersection(0)
    if idx.size > 1:
        raise NumericalError("more than one crossing per half; profiles inconsistent")
    i = idx[0]
    yr = nm.find_root(lambda t: float(d(np.array([t]))[0]), y[i], y[i + 1])
    hr = float(p1.height_over_radius(np.array([yr]))[0])
    return Intersection(2, (yr, yr), (hr, -hr))


def principal_curvatures(a: float, s):
    """``(k_p, k_n)`` along the minimal catenoid, arclength form of the graph formulas."""
    p = build_profile(FamilySpec("h3min", a))
    s = np.asarray(s, dtype=float)
    y, ys = p.radius(s), p.d_radius(s)
    ls = p.d_height(s)
    h = np.full(s.shape, 1e-3)
    yss = nm.central_diff(p.d_radius, s, h)
    lss = nm.central_diff(p.d_height, s, h)
    ch, sh = np.cosh(y), np.sinh(y)
    kp = (lss * ys - ls * yss) * ch + 2.0 * ls * ys**2 * sh + ls**3 * ch**2 * sh
    kn = ls * ch**2 / sh
    return kp, kn


def second_fundamental_norm(a: float, s):
    kp, kn = principal_curvatures(a, s)
    return kp**2 + kn**2


def mori_sup(a: float) -> float:
    s = np.concatenate([[0.0], np.geomspace(1e-4, 20, 400)])
    return float(np.max(second_fundamental_norm(a, s)))


def _norm_A_closed(a, y):
    # 1/sinh^2 y written with exp(-2y) so large y underflows instead of overflowing
    q = np.exp(-2.0 * np.abs(y))
    inv = 4.0 * q / (1.0 - q) ** 2
    return math.sinh(2 * a) ** 2 * inv * inv / 2.0


def cd_integrand(a: float, s):
    """``|A|^2 (|A|^2 - 6)`` times the area density on the orbit circles."""
    p = build_profile(FamilySpec("h3min", a))
    scalar = np.ndim(s) == 0
    y = np.atleast_1d(p.radius(np.atleast_1d(np.asarray(s, dtype=float))))
    out = np.zeros_like(y)
    ok = y < 150
    A2 = _norm_A_closed(a, y[ok])
    out[ok] = A2 * (A2 - 6.0) * np.sinh(y[ok])
    return float(out[0]) if scalar else out


def cd_functional(a: float) -> float:
    """``int |A|^2 (|A|^2 - 6) dmu`` over the whole catenoid."""
    q = nm.integrate(lambda s: float(cd_integrand(a, s)), 0.0)
    return 4.0 * math.pi * q.value


def cd_threshold(lo: float = 0.3, hi: float = 0.7) -> float:
    return nm.find_root(cd_functional, lo, hi)


def e0_sign_changes(a_grid) -> list[tuple[float, float]]:
    """Brackets of consecutive grid values where ``E0`` changes sign."""
    vals = np.array([E0(a) for a in a_grid])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    return [(float(a_grid[i]), float(a_grid[i + 1])) for i in idx]


def i0_sign_certificate(a: float, t_max: float = 40.0) -> bool:
    """True when the integrand of ``E0`` is non-positive on a fine grid."""
    t = np.concatenate([[0.0], np.geomspace(1e-6, t_max, 2000)])
    return bool(np.all(i0_integrand(a, t) <= 0))
