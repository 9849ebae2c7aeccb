"""Command-line front end.

Exit codes: 0 success, 1 numerical failure or failed verification,
2 usage error (bad flags, bad parameters, unsupported combinations).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import acceptance, stability as st
from .config import ConfigError, RunConfig, parse_interval, resolve
from .errors import IdenticalCurves, NumericalError, OutOfDomain, UnsupportedFamily
from .flux import boundary_flux_balance, flux_constancy
from .jacobi import combined_field, jacobi_pair, standard_grid
from .profiles import FamilySpec, build_profile, default_grid, heights, mesh_table, profile_table
from .spectral import N_DEFAULT, assemble, index_on_interval, lambda1

COMMANDS = ("profile", "jacobi", "stability", "scan", "spectrum", "envelope", "flux", "verify")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.15g}"
    if x is None:
        return ""
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        # round-trip at 15 significant digits
        return float(f"{x:.15g}")
    return x


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def emit_table(cfg: RunConfig, header, rows, notes=(), path=None, extra=None):
    """Write a table as CSV (the default; ``#`` comment lines, then a header row) or JSON."""
    path = cfg.out if path is None else path
    with _sink(path) as fh:
        if cfg.format == "json":
            doc = {"config_hash": cfg.digest(), "columns": list(header),
                   "rows": _jsonable([list(r) for r in rows]), "notes": list(notes)}
            if extra:
                doc.update(_jsonable(extra))
            json.dump(doc, fh, indent=2)
            fh.write("\n")
            return
        fh.write(f"# config-hash {cfg.digest()}\n")
        for note in notes:
            fh.write(f"# {note}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def emit_record(cfg: RunConfig, record: dict):
    """Write a single result; JSON by default, ``key,value`` rows for ``--format csv``."""
    record = {"config_hash": cfg.digest(), **record}
    if cfg.format == "csv":
        flat = [(k, v) for k, v in record.items() if not isinstance(v, (dict, list, tuple))]
        emit_table(cfg, ["key", "value"], flat)
        return
    with _sink(cfg.out) as fh:
        json.dump(_jsonable(record), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _spec(cfg: RunConfig, a=None) -> FamilySpec:
    return FamilySpec(cfg.family_name(), cfg.a if a is None else float(a), cfg.n)


def _grid(cfg: RunConfig, p, default_n: int):
    n = cfg.grid_size(default_n)
    if cfg.interval is None:
        return default_grid(p, n)
    lo, hi = cfg.interval
    if not (-p.T < lo and hi < p.T):
        raise OutOfDomain(f"interval [{lo}, {hi}] not inside (-T, T) with T={p.T:.15g}")
    return np.linspace(lo, hi, n)


def cmd_profile(cfg: RunConfig) -> int:
    p = build_profile(_spec(cfg))
    grid = _grid(cfg, p, 201)
    notes = [f"{p.spec.label()} neck={p.neck:.15g} T={p.T:.15g}"]
    if cfg.mesh:
        rows = mesh_table(p, grid, cfg.n_theta)
        dim = len(rows[0]) - 2
        header = ["s", "theta", *(f"x{i + 1}" for i in range(dim))]
        if cfg.out is None:
            emit_table(cfg, header, rows, notes)
            return 0
        emit_table(cfg, ["s", "radius", "height", "d_radius", "d_height"], profile_table(p, grid), notes)
        emit_table(cfg, header, rows, notes, path=_mesh_path(cfg.out))
        return 0
    emit_table(cfg, ["s", "radius", "height", "d_radius", "d_height"], profile_table(p, grid), notes)
    return 0


def _mesh_path(out: str) -> str:
    stem, dot, ext = out.rpartition(".")
    return f"{stem}.mesh.{ext}" if dot else f"{out}.mesh"


def cmd_jacobi(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    pair = jacobi_pair(spec)
    if cfg.interval is None:
        grid = standard_grid(spec, cfg.grid_size(101))
    else:
        grid = _grid(cfg, pair.profile, 101)
    w = combined_field(pair, cfg.alpha)(grid) if cfg.alpha is not None else np.full(grid.shape, np.nan)
    rows = zip(grid, pair.v(grid), pair.e(grid), w)
    notes = [f"{spec.label()} e(0)={pair.e_at_neck:+g} lim e/v={pair.ratio_limit:.15g}"]
    if cfg.alpha is not None:
        notes.append(f"w = v(alpha) e + e(alpha) v with alpha={cfg.alpha:.15g}")
    emit_table(cfg, ["s", "v", "e", "w"], rows, notes)
    return 0


def cmd_stability(cfg: RunConfig) -> int:
    report = st.classify(_spec(cfg))
    emit_record(cfg, report.to_dict())
    return 0


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.family_name() != "h3min":
        raise UsageError("scan tabulates E0, V0 and X0 of the minimal H^3 catenoids; use --family h3min")
    a_vals = cfg.a_values()
    if a_vals.size < 1:
        raise UsageError("empty a-range")
    rows = []
    for a in a_vals:
        e0 = st.E0(float(a))
        v0, x0 = heights(FamilySpec("h3min", float(a)))
        rows.append([float(a), e0, v0, x0, 1 if e0 > 0 else 0])
    notes, changes = [], []
    for r0, r1 in zip(rows, rows[1:]):
        if np.sign(r0[1]) != np.sign(r1[1]):
            root = st.a0(r0[0], r1[0])
            changes.append({"lo": r0[0], "hi": r1[0], "a0": root})
            notes.append(f"E0 changes sign in [{r0[0]:.15g}, {r1[0]:.15g}]; root a0={root:.15g}")
    if not changes:
        notes.append("E0 has no sign change on this range")
    for note in notes:
        print(note, file=sys.stderr)
    emit_table(cfg, ["a", "E0", "V0", "X0", "index"], rows, notes, extra={"sign_changes": changes})
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    interval = cfg.interval if cfg.interval is not None else (-math.inf, math.inf)
    N = cfg.grid_size(N_DEFAULT)
    prob = assemble(spec, interval, N)
    res = lambda1(prob, N, with_truncation_check=prob.truncated_at is not None)
    emit_record(cfg, {
        "family": spec.family, "n": spec.n, "a": spec.a,
        "lo": prob.lo, "hi": prob.hi, "N": N,
        "lambda1": res.lambda1,
        "index": index_on_interval(prob, N),
        "truncated_at": prob.truncated_at,
        "truncation_shift": res.truncation_shift,
        "recovery_mismatch": prob.recovery_mismatch,
    })
    return 0


def cmd_envelope(cfg: RunConfig) -> int:
    if cfg.n < 2:
        raise UsageError("n must be at least 2")
    env = st.envelope_cone(cfg.n)
    fit = st.envelope_fit(cfg.n)
    emit_record(cfg, {"n": cfg.n, "slope": env.slope, "z": env.z, "c_z": env.c_z,
                      "fitted_slope": fit, "slope_mismatch": abs(fit - env.slope)})
    return 0


def cmd_flux(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    p = build_profile(spec)
    grid = default_grid(p, cfg.grid_size(101))
    trace = flux_constancy(spec, grid, tol=cfg.tol or 1e-13)
    record = {"family": spec.family, "n": spec.n, "a": spec.a,
              "flux_constant": p.flux_constant, "max_rel_deviation": trace.max_rel_deviation}
    if cfg.interval is not None:
        bal = boundary_flux_balance(spec, st.DomainSpec(*cfg.interval), tol=cfg.tol or 1e-13)
        record.update(lo=cfg.interval[0], hi=cfg.interval[1], boundary=bal.boundary,
                      interior=bal.interior, residual=bal.residual)
    emit_record(cfg, record)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    results = acceptance.run_all(cfg.tol_scale, cfg.filter)
    if not results:
        raise UsageError(f"no criterion matches filter {cfg.filter!r}")
    for r in results:
        print(acceptance.format_line(r))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed (tol-scale {cfg.tol_scale:g})")
    if cfg.out is not None:
        rows = [[r.number, r.name, r.passed, r.detail] for r in results]
        emit_table(cfg, ["criterion", "name", "passed", "detail"], rows)
    return 0 if passed == len(results) else 1


HANDLERS = {
    "profile": cmd_profile,
    "jacobi": cmd_jacobi,
    "stability": cmd_stability,
    "scan": cmd_scan,
    "spectrum": cmd_spectrum,
    "envelope": cmd_envelope,
    "flux": cmd_flux,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lindelof", description="Stability of catenoids and catenoid cousins.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value file; command-line flags take precedence")
    ap.add_argument("--family", help="euclid | h2xr | hnxr | h3min | cousin")
    ap.add_argument("--n", type=int, help="dimension of the rotation hypersurface (euclid, hnxr)")
    ap.add_argument("--a", type=float, help="neck parameter, > 0")
    ap.add_argument("--a-min", type=float)
    ap.add_argument("--a-max", type=float)
    ap.add_argument("--a-step", type=float)
    ap.add_argument("--interval", type=parse_interval, help="LO:HI in the native parameter; inf allowed")
    ap.add_argument("--grid", type=int, help="number of sample or grid points")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--out", help="output path (default stdout)")
    ap.add_argument("--tol", type=float, help="ODE tolerance for flux checks")
    ap.add_argument("--alpha", type=float, help="left end -alpha of the combined Jacobi field")
    ap.add_argument("--mesh", action="store_true", default=None, help="emit embedded mesh points")
    ap.add_argument("--n-theta", type=int)
    ap.add_argument("--tol-scale", type=float, help="multiply every acceptance tolerance")
    ap.add_argument("--filter", help="run only criteria matching this tag, name fragment or number")
    return ap


def _glue_interval(argv):
    """Let ``--interval -1:2`` through; argparse would read ``-1:2`` as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--interval":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--interval={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_interval(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        values = {k: v for k, v in vars(args).items() if k != "config"}
        cfg = resolve(values, args.config)
        return HANDLERS[cfg.command](cfg)
    except (UsageError, ConfigError, UnsupportedFamily, OutOfDomain, IdenticalCurves, FileNotFoundError) as exc:
        print(f"lindelof: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"lindelof: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"lindelof: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
