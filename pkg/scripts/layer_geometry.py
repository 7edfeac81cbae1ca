"""Map spectral reality of the N = 4 two-coefficient model near the EP.

Prints a character grid over (A, B): '#' real spectrum, '.' complex, with
the layer edges A - B = -1/4 and A - B = 4/9 marked '|' where they cross
the grid, then the cross-validation summary.

    python3 scripts/layer_geometry.py --lam 1e-3 --size 31
"""
import argparse
import sys

import numpy as np

from qcat.diagnostics import classify_reality, layer_cross_validate, layer_spec
from qcat.model import build_multiparam
from qcat.oracle import eigvals


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--lam", type=float, default=1e-3)
    p.add_argument("--size", type=int, default=31)
    p.add_argument("--span", type=float, default=1.5)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    lo, hi = layer_spec(4).bounds
    axis = np.linspace(-args.span, args.span, args.size)
    half = (axis[1] - axis[0]) / 2
    print(f"lambda = {args.lam:g}; rows B = {axis[-1]:+.2f} .. {axis[0]:+.2f}, cols A left to right")
    for b in axis[::-1]:
        line = []
        for a in axis:
            x = a - b
            if min(abs(x - lo), abs(x - hi)) < half:
                line.append("|")
                continue
            real, _ = classify_reality(eigvals(build_multiparam(4, args.lam, [a, b])))
            line.append("#" if real else ".")
        print("".join(line))

    rng = np.random.default_rng(args.seed)
    pts = rng.uniform(-args.span, args.span, size=(args.samples, 2))
    rep = layer_cross_validate(pts, args.lam)
    print(f"cross-validation: {rep.checked} checked, {len(rep.disagreements)} disagreements")
    return 0 if not rep.disagreements else 1


if __name__ == "__main__":
    sys.exit(main())
