"""Conservation laws from the axial Killing field.

For a rotation hypersurface with constant mean curvature ``H`` and the
Killing field ``K`` generating translations along the axis, the flux of
``K`` through an orbit sphere changes only by ``n H`` times the integral of
``<K, N>``. For minimal catenoids this is a first integral of the profile ODE.

All checks here run on the ODE-integrated profile, never on the closed forms,
so they test the profiles independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics as nm
from .profiles import FamilySpec, Profile, build_profile, ode_profile, sphere_volume
from .stability import DomainSpec


@dataclass(frozen=True)
class FluxTrace:
    s: np.ndarray
    values: np.ndarray
    constant_estimate: float
    max_rel_deviation: float


def flux_constancy(spec: FamilySpec, grid, tol: float = 1e-13) -> FluxTrace:
    """Evaluate the first integral of the profile along the ODE solution."""
    p = build_profile(spec)
    grid = np.asarray(grid, dtype=float)
    r, _, dr, dh = ode_profile(p, grid, tol=tol)
    vals = p.first_integral(r, dr, dh)
    ref = p.flux_constant
    dev = float(np.max(np.abs(vals - ref)) / abs(ref))
    return FluxTrace(grid, vals, float(np.mean(vals)), dev)


def _orbit_volume(p: Profile, r):
    """(n-1)-volume of the orbit sphere of radius coordinate ``r``."""
    return p.area_factor(r) ** (p.spec.n - 1) * sphere_volume(p.spec.n)


def boundary_flux(p: Profile, s, tol: float = 1e-13):
    """Flux of the axial Killing field through the orbit sphere at ``s``.

    The unit conormal pointing towards increasing ``s`` is ``X_s/|X_s|``;
    ``<K, X_s> = G^2 h_s`` with ``G^2`` the metric factor of the axis.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    r, _, dr, dh = ode_profile(p, s, tol=tol)
    G2 = np.cosh(r) ** 2 if p.spec.family in ("h3min", "cousin") else np.ones_like(r)
    speed = np.sqrt(dr * dr + G2 * dh * dh)
    return G2 * dh / speed * _orbit_volume(p, r)


@dataclass(frozen=True)
class FluxBalance:
    boundary: float
    interior: float
    residual: float


def boundary_flux_balance(spec: FamilySpec, domain: DomainSpec, tol: float = 1e-13) -> FluxBalance:
    """Both sides of the flux formula on the rotation domain ``domain``.

    ``boundary`` sums the outward fluxes through the two boundary spheres.
    ``interior`` is ``n H int_D <K, N> dmu`` (zero for minimal families),
    computed by quadrature on the ODE profile. ``residual`` is their difference.
    """
    p = build_profile(spec)
    lo, hi = domain.lower, domain.upper
    if not (-p.T < lo < hi < p.T):
        raise ValueError(f"domain [{lo}, {hi}] not inside (-T, T)")
    flux = boundary_flux(p, np.array([lo, hi]), tol=tol)
    boundary = float(flux[1] - flux[0])
    interior = 0.0
    if p.H != 0:
        traj_s = max(abs(lo), abs(hi))
        traj = p.ode_trajectory(traj_s * (1 + 1e-12), tol=tol)

        def density(s):
            # <K, N> times the orbit volume; N = (-G h_s, r_s / G) in the
            # orthonormal frame, K = (0, G)
            y, _, psi = traj(abs(s))
            r_s = math.cos(psi) * math.copysign(1.0, s)
            return math.cosh(y) * r_s * float(_orbit_volume(p, y))

        pieces = [(lo, min(hi, 0.0)), (max(lo, 0.0), hi)]
        q = sum(nm.integrate(density, a, b).value for a, b in pieces if a < b)
        interior = p.spec.n * p.H * q
    return FluxBalance(boundary, interior, boundary - interior)
