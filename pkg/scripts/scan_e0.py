"""Tabulate E0, V0 and X0 of the minimal H^3 catenoids and locate the thresholds.

Writes a CSV of the scan plus the refined a0 (sign change of E0), the
closed-form a1, and the do Carmo-Dajczer crossing.
"""

import argparse
import csv
import math

import numpy as np

from lindelof import stability as st


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a-min", type=float, default=0.1)
    ap.add_argument("--a-max", type=float, default=3.0)
    ap.add_argument("--a-step", type=float, default=0.01)
    ap.add_argument("--out", default="e0_scan.csv")
    args = ap.parse_args()

    grid = np.round(np.arange(args.a_min, args.a_max + 0.5 * args.a_step, args.a_step), 12)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "E0", "V0", "X0", "index"])
        for a in grid:
            e0, v0 = st.E0(a), st.V0(a)
            w.writerow([f"{a:.15g}", f"{e0:.15g}", f"{v0:.15g}", f"{math.exp(v0):.15g}", int(e0 > 0)])

    for lo, hi in st.e0_sign_changes(grid):
        print(f"E0 changes sign in [{lo}, {hi}]: a0 = {st.a0(lo, hi):.12f}")
    print(f"a1 (closed form)       = {st.A_ONE:.12f}")
    print(f"do Carmo-Dajczer a_CD  = {st.cd_threshold():.12f}")
    print(f"Mori threshold acosh 3 = {st.A_MORI:.12f}")


if __name__ == "__main__":
    main()
