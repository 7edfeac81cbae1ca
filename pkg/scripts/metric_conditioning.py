"""Smallest eigenvalue and condition number of the metric across N and lambda.

    python3 scripts/metric_conditioning.py --nmax 8 --csv cond.csv
"""
import argparse
import csv
import sys

import numpy as np

from qcat.diagnostics import metric_conditioning


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--lambdas", default="1,0.5,0.1,0.01,0.001")
    p.add_argument("--csv", default=None, help="also write the table here")
    args = p.parse_args(argv)
    lams = [float(x) for x in args.lambdas.split(",")]

    rows = []
    for n in range(2, args.nmax + 1):
        for lam in lams:
            wmin, cond = metric_conditioning(n, lam)
            rows.append((n, lam, wmin, cond))

    print(f"{'N':>3} {'lambda':>8} {'min eig':>12} {'cond':>12}")
    for n, lam, wmin, cond in rows:
        # below ~1e-16 relative the smallest eigenvalue is rounding noise
        flag = "" if wmin > 1e-14 * np.sqrt(n) else "  (below double resolution)"
        print(f"{n:3d} {lam:8.3g} {wmin:12.4e} {cond:12.4e}{flag}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "lambda", "theta_min_eig", "theta_cond"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
