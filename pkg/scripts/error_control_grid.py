#!/usr/bin/env python3
"""Full error-control benchmark grid at configurable scale.

Thin driver over run_comparison for reproducing the noise-grid comparison at
larger n or denser grids than the CLI defaults, e.g.:

    python scripts/error_control_grid.py --n 50000 --seeds 10 \
        --out grid_full.csv
"""

import argparse

import numpy as np

from signbound import SimConfig, run_comparison
from signbound.tables import write_sim_outcomes


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=5000)
    parser.add_argument("--sigma-grid", default="0.1,0.4,0.7,1.0")
    parser.add_argument("--k-grid", default="1,5,10")
    parser.add_argument("--seeds", type=int, default=50,
                        help="number of seeds per cell (0..seeds-1)")
    parser.add_argument("--methods", default="sdr-sdp,bh")
    parser.add_argument("--target", type=float, default=0.1)
    parser.add_argument("--q", type=float, default=0.5)
    parser.add_argument("--alpha", type=float, default=0.1)
    parser.add_argument("--out", default="error_control_grid.csv")
    args = parser.parse_args()

    base = SimConfig(n=args.n, sigma=1.0)
    outcomes = run_comparison(
        base,
        [float(x) for x in args.sigma_grid.split(",")],
        [float(x) for x in args.k_grid.split(",")],
        list(range(args.seeds)),
        tuple(m.strip() for m in args.methods.split(",")),
        target=args.target, q=args.q, alpha=args.alpha,
    )
    write_sim_outcomes(args.out, outcomes)

    by_cell = {}
    for out in outcomes:
        by_cell.setdefault((out.method, out.sigma, out.k), []).append(
            out.type_s_proportion)
    print(f"{'method':>16} {'sigma':>6} {'k':>4} {'mean type S':>12}")
    for key in sorted(by_cell):
        print(f"{key[0]:>16} {key[1]:>6g} {key[2]:>4g} "
              f"{np.mean(by_cell[key]):>12.4f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
