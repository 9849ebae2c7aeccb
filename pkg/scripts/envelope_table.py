"""Catenaries a c_n(t/a) and their envelope cone, as plot data.

Writes one CSV with the catenaries for several necks and prints the cone
slope next to the brute-force fit.
"""

import argparse
import csv

import numpy as np

from lindelof import stability as st
from lindelof.profiles import FamilySpec, build_profile


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--necks", type=float, nargs="+", default=[0.25, 0.5, 1.0, 1.5, 2.0])
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--out", default="envelope.csv")
    args = ap.parse_args()

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "t", "radius"])
        for a in args.necks:
            p = build_profile(FamilySpec("euclid", a, args.n))
            span = 0.98 * p.T if np.isfinite(p.T) else 4.0 * a
            for t in np.linspace(0.0, span, args.points):
                w.writerow([f"{a:.15g}", f"{t:.15g}", f"{float(p.radius(t)):.15g}"])

    env = st.envelope_cone(args.n)
    print(f"n={args.n}: touch point z={env.z:.12f}, c(z)={env.c_z:.12f}")
    print(f"cone slope z/c(z) = {env.slope:.12f}; fitted = {st.envelope_fit(args.n):.12f}")


if __name__ == "__main__":
    main()
