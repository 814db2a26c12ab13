#!/usr/bin/env python3
"""Synthesize a demo study table for the assess/control commands.

Parameters get true effects, two replicate estimates, per-parameter modules,
proposed signs from the first replicate, validation signs from the second,
and |first replicate| as the confidence score.
"""

import argparse

import numpy as np

from signbound import SimConfig, generate, split_replicates
from signbound.sdr_core import SignStudy
from signbound.tables import write_study


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--sigma", type=float, default=0.5)
    parser.add_argument("--k", type=float, default=5.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--params-per-module", type=int, default=1)
    parser.add_argument("--out", default="demo_study.csv")
    args = parser.parse_args()

    config = SimConfig(n=args.n, sigma=args.sigma, k=args.k, seed=args.seed)
    _, est = generate(config)
    proposed, validation = split_replicates(est, (0,), tie="random", seed=args.seed)
    modules = np.arange(args.n) // args.params_per_module
    study = SignStudy.from_labels(
        proposed, validation, [f"m{m:05d}" for m in modules], np.abs(est[0]))
    write_study(args.out, study, tuple(f"p{i:05d}" for i in range(args.n)))
    print(f"wrote {args.out} ({args.n} parameters, "
          f"{study.n_modules} modules)")


if __name__ == "__main__":
    main()
