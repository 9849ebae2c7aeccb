"""Run the acceptance suite and write a CSV summary.

Usage: python3 scripts/reproduce_acceptance.py [--tol-scale X] [--filter TAG] [--out PATH]
"""

import argparse
import csv
import sys

from lindelof import acceptance


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tol-scale", type=float, default=1.0)
    ap.add_argument("--filter")
    ap.add_argument("--out", default="acceptance.csv")
    args = ap.parse_args()

    results = acceptance.run_all(args.tol_scale, args.filter)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["criterion", "name", "passed", "seconds", "detail"])
        for r in results:
            print(acceptance.format_line(r))
            w.writerow([r.number, r.name, r.passed, f"{r.seconds:.2f}", r.detail])
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed {failed}" if failed else ""))
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
