"""Acceptance suite shared by ``lindelof verify`` and the test-suite.

Each criterion returns a :class:`CriterionResult`. Tolerances are multiplied
by ``tol_scale`` so that an absurdly tight scale demonstrates that the
checks can fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gamma

from . import numerics as nm
from . import stability as st
from .errors import Divergent
from .flux import boundary_flux_balance, flux_constancy
from .jacobi import jacobi_pair, standard_grid, variation_fd_check, wronskian, wronskian_deviation
from .profiles import FamilySpec, build_profile, default_grid, profile_cross_check
from .spectral import assemble, lambda1
from .stability import DomainSpec

# (family, a, n) samples used by the spectral and conservation criteria
FAMILY_GRID = [
    ("euclid", 1.0, 2),
    ("euclid", 1.0, 3),
    ("euclid", 1.0, 4),
    ("h2xr", 0.5, 2),
    ("h2xr", 1.0, 2),
    ("hnxr", 0.5, 2),
    ("hnxr", 0.5, 3),
    ("h3min", 0.2, 2),
    ("h3min", 0.3, 2),
    ("cousin", 0.5, 2),
    ("cousin", 1.0, 2),
]
CONSERVATION_GRID = FAMILY_GRID + [("h3min", 1.0, 2), ("euclid", 1.0, 5), ("hnxr", 1.0, 2)]

LINDELOF_TRUE = [("euclid", 2), ("cousin", 2)]
LINDELOF_FALSE = [("euclid", 3), ("euclid", 4), ("euclid", 5), ("h2xr", 2), ("hnxr", 2), ("hnxr", 3), ("h3min", 2)]
TABLE_A = (0.2, 0.5, 1.0)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    tags: tuple[str, ...] = ()


@dataclass
class Criterion:
    number: int
    name: str
    tags: tuple[str, ...]
    run: Callable[[float], tuple[bool, str]] = field(repr=False)

    def matches(self, pattern: str | None) -> bool:
        if not pattern:
            return True
        pattern = pattern.lower()
        return pattern in self.name.lower() or any(pattern in t for t in self.tags) or pattern == str(self.number)


def _spec(fam, a, n):
    return FamilySpec(fam, a, n)


# ---------------------------------------------------------------------------


def c01_xi0(k):
    g = lambda t: 1.0 - t * math.tanh(t)
    root = nm.find_root(g, 1.0, 2.0)
    lo, hi = 1.0, 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    ref = 0.5 * (lo + hi)
    err = abs(root - ref)
    return err <= 1e-10 * k, f"xi0={root:.13f} bisection={ref:.13f} diff={err:.2e}"


def c02_t3(k):
    q = nm.integrate(nm.Integrand(lambda u: (u**4 - 1.0) ** -0.5, (1.0,)), 1.0, math.inf)
    ref = gamma(0.25) * gamma(0.5) / (4.0 * gamma(0.75))
    err = abs(q.value - ref)
    try:
        nm.integrate(nm.Integrand(lambda u: (u * u - 1.0) ** -0.5, (1.0,)), 1.0, math.inf)
        diverges = False
    except Divergent:
        diverges = True
    return err <= 1e-8 * k and diverges, f"T3={q.value:.12f} closed={ref:.12f} diff={err:.2e}; T2 divergent={diverges}"


def c03_a0(k):
    a0 = st.a0()
    ok = 0.49 <= a0 <= 0.50 and abs(a0 - 0.4955) <= 2e-3 * k
    return ok, f"a0={a0:.10f} |a0-0.4955|={abs(a0 - 0.4955):.2e}"


def c04_a1(k):
    a1 = st.A_ONE
    grid = np.linspace(a1, 3.0, 50)
    vals = np.array([st.E0(a) for a in grid])
    ok = abs(a1 - 0.5915) <= 1e-3 * k and bool(np.all(vals < 0))
    return ok, f"a1={a1:.10f} max E0 on [a1,3]={vals.max():.3e}"


def c05_acd(k):
    lo, hi = 0.4668 - 0.02 * k, 0.4668 + 0.02 * k
    flo, fhi = st.cd_functional(lo), st.cd_functional(hi)
    ok = flo > 0 > fhi
    return ok, f"CD({lo:.4f})={flo:.4e} CD({hi:.4f})={fhi:.4e}"


def c06_mori(k):
    hi, lo = st.mori_sup(1.80), st.mori_sup(1.70)
    ok = hi <= 2.25 < lo
    return ok, f"sup|A|^2(1.80)={hi:.6f} sup|A|^2(1.70)={lo:.6f} bound=2.25"


def c07_lindelof(k):
    bad = []
    for expected, fams in ((True, LINDELOF_TRUE), (False, LINDELOF_FALSE)):
        for fam, n in fams:
            for a in TABLE_A:
                r = st.classify(_spec(fam, a, n))
                if r.lindelof != expected:
                    bad.append(f"{r.spec.label()}={r.lindelof}")
    total = len(TABLE_A) * (len(LINDELOF_TRUE) + len(LINDELOF_FALSE))
    return not bad, f"{total - len(bad)}/{total} verdicts as expected" + (f"; wrong: {bad}" if bad else "")


def c08_ordering(k):
    checked, bad = 0, []
    for fam, n in LINDELOF_TRUE + LINDELOF_FALSE:
        for a in TABLE_A:
            r = st.classify(_spec(fam, a, n))
            if r.ell is not None and r.z is not None:
                checked += 1
                T = jacobi_pair(r.spec).T
                if not (0 < r.ell < r.z < T):
                    bad.append(r.spec.label())
    return checked > 0 and not bad, f"{checked} (family, a) pairs with both ell and z" + (f"; violations {bad}" if bad else "")


def c09_spectral(k):
    lines, ok = [], True
    for fam, a, n in FAMILY_GRID:
        spec = _spec(fam, a, n)
        z = st.variation_zero(spec)
        lams = [lambda1(assemble(spec, (-f * z, f * z))).lambda1 for f in (0.95, 1.0, 1.1)]
        good = lams[0] > 0 and abs(lams[1]) <= 1e-3 * k and lams[2] < 0 and lams[0] > lams[1] > lams[2]
        ok &= good
        lines.append(f"{spec.label()}: {lams[0]:+.3e} {lams[1]:+.2e} {lams[2]:+.3e}{'' if good else ' FAIL'}")
    return ok, "; ".join(lines)


def c10_wronskian(k):
    worst, where = 0.0, ""
    for fam, a, n in CONSERVATION_GRID:
        spec = _spec(fam, a, n)
        g = standard_grid(spec)
        d = wronskian_deviation(spec, g[g != 0])
        if d > worst:
            worst, where = d, spec.label()
    pair = jacobi_pair(_spec("euclid", 1.0, 2))
    t = np.linspace(-5, 5, 101)
    r3 = float(np.max(np.abs(wronskian(pair, t) + 1.0)))
    ok = worst <= 1e-6 * k and r3 <= 1e-10 * k
    return ok, f"max relative deviation {worst:.2e} ({where}); R3 |W+1|={r3:.2e}"


TANGENT_NECK = {2: 1.0, 3: 2.0, 4: 2.0}


def c11_tangent(k):
    worst_res = worst_inv = 0.0
    used = []
    for n in (2, 3, 4):
        spec = _spec("euclid", TANGENT_NECK[n], n)
        T = jacobi_pair(spec).T
        ell = st.half_vertical_threshold(spec)
        for alpha in (0.8, 1.5, 2.5):
            if alpha >= T or (ell is not None and alpha <= ell):
                continue
            beta = st.conjugate_point(spec, alpha)
            back = st.conjugate_point(spec, beta)
            worst_res = max(worst_res, abs(st.tangent_residual(spec, alpha, beta)))
            worst_inv = max(worst_inv, abs(back - alpha))
            used.append(f"n={n}:{alpha}")
    ok = bool(used) and worst_res <= 1e-8 * k and worst_inv <= 1e-8 * k
    return ok, f"{len(used)} pairs ({', '.join(used)}); max residual {worst_res:.2e}; max |beta(beta)-alpha| {worst_inv:.2e}"


def c12_profiles(k):
    worst_x = worst_f = 0.0
    for fam, a, n in CONSERVATION_GRID:
        spec = _spec(fam, a, n)
        g = default_grid(build_profile(spec), 101)
        worst_x = max(worst_x, profile_cross_check(spec, g))
        worst_f = max(worst_f, flux_constancy(spec, g).max_rel_deviation)
    ok = worst_x <= 1e-8 * k and worst_f <= 1e-8 * k
    return ok, f"ODE vs closed form {worst_x:.2e}; flux constancy {worst_f:.2e}"


def c13_cousin_variation(k):
    worst, scales = 0.0, []
    s = np.linspace(0.1, 5.0, 50)
    for a in (0.3, 0.7, 1.2):
        chk = variation_fd_check(_spec("cousin", a, 2), s)
        worst = max(worst, chk.deviation)
        scales.append(chk.scale)
    ok = worst <= 1e-4 * k and all(abs(abs(c) - 1.0) <= 1e-4 * k for c in scales)
    return ok, f"max relative deviation {worst:.2e}; fitted scales {[round(c, 8) for c in scales]}"


def c14_vheight(k):
    errs = [st.vheight_consistency(a) for a in (0.3, 0.5, 1.0)]
    return max(errs) <= 1e-6 * k, "errors " + ", ".join(f"{e:.2e}" for e in errs)


def c15_intersections(k):
    small = st.intersect_catenaries(0.2, 0.3).count
    large = st.intersect_catenaries(1.0, 1.5).count
    return small == 2 and large == 0, f"(0.2,0.3)->{small} (1.0,1.5)->{large}"


def c16_flux_balance(k):
    T3 = build_profile(_spec("euclid", 1.0, 3)).T
    cases = [
        (_spec("euclid", 1.0, 3), DomainSpec(-0.2, 0.7 * T3)),
        (_spec("h2xr", 1.0, 2), DomainSpec(-0.5, 2.0)),
        (_spec("h3min", 0.3, 2), DomainSpec(-0.4, 1.5)),
    ]
    worst = max(abs(boundary_flux_balance(s, d).residual) for s, d in cases)
    cb = boundary_flux_balance(_spec("cousin", 0.5, 2), DomainSpec(-0.3, 1.7))
    rel = abs(cb.residual) / abs(cb.interior)
    ok = worst <= 1e-8 * k and rel <= 1e-6 * k
    return ok, f"minimal residual {worst:.2e}; cousin boundary={cb.boundary:.10f} interior={cb.interior:.10f} rel {rel:.2e}"




def _criteria():
    return [
        Criterion(1, "xi0 root vs bisection", ("r3", "root"), c01_xi0),
        Criterion(2, "T3 quadrature and T2 divergence", ("euclid", "quadrature"), c02_t3),
        Criterion(3, "a0 sign change of E0", ("h3",), c03_a0),
        Criterion(4, "a1 and E0 < 0 beyond", ("h3",), c04_a1),
        Criterion(5, "do Carmo-Dajczer threshold", ("h3",), c05_acd),
        Criterion(6, "Mori threshold", ("h3",), c06_mori),
        Criterion(7, "Lindelof table", ("stability", "euclid", "h3", "hxr"), c07_lindelof),
        Criterion(8, "ordering 0 < ell < z", ("stability",), c08_ordering),
        Criterion(9, "spectral cross-validation", ("spectral",), c09_spectral),
        Criterion(10, "Wronskian constancy", ("jacobi",), c10_wronskian),
        Criterion(11, "tangent construction", ("euclid",), c11_tangent),
        Criterion(12, "profile cross-check and flux constancy", ("profiles", "flux"), c12_profiles),
        Criterion(13, "cousin variation field", ("h3", "cousin", "jacobi"), c13_cousin_variation),
        Criterion(14, "V0' = sqrt2 E0", ("h3",), c14_vheight),
        Criterion(15, "intersection and foliation", ("h3",), c15_intersections),
        Criterion(16, "flux boundary balance", ("flux",), c16_flux_balance),
    ]


CRITERIA = _criteria()


def run_criterion(c: Criterion, tol_scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        passed, detail = c.run(tol_scale)
    except Exception as exc:  # a crash is a failure, reported with its cause
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(c.number, c.name, bool(passed), detail, time.perf_counter() - t0, c.tags)


def run_all(tol_scale: float = 1.0, pattern: str | None = None) -> list[CriterionResult]:
    return [run_criterion(c, tol_scale) for c in CRITERIA if c.matches(pattern)]


def format_line(r: CriterionResult) -> str:
    return f"[{'PASS' if r.passed else 'FAIL'}] {r.number:2d} {r.name}: {r.detail} ({r.seconds:.1f}s)"
