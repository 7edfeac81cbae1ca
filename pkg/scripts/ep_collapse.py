"""Coalescence of energies and eigenvectors as lambda approaches the EP.

    python3 scripts/ep_collapse.py --n 6
"""
import argparse
import sys

from qcat.diagnostics import ep_collapse_report


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--lambdas", default="0.5,0.1,0.01,0.001,0.0001")
    p.add_argument("--dps", type=int, default=50)
    args = p.parse_args(argv)
    rep = ep_collapse_report(args.n, [float(x) for x in args.lambdas.split(",")], args.dps)

    print(f"N = {rep.n}")
    print(f"{'lambda':>9} {'spread':>11} {'1-cos(R)':>11} {'1-cos(L)':>11} {'theta min':>11}")
    for r in rep.rows:
        print(
            f"{r.lam:9.2g} {r.spread:11.4e} {1 - r.cos_right:11.3e} "
            f"{1 - r.cos_left:11.3e} {r.theta_min_eig:11.3e}"
        )
    print(
        f"spread decreasing: {rep.spread_decreasing}, "
        f"cosines increasing: {rep.cosine_increasing}, "
        f"metric floor decreasing: {rep.theta_decreasing}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
