"""Command line surface: bound, assess, control, simulate.

Exit codes: 0 success, 2 user error (bad flags or malformed input files),
3 numerical failure of the exponent optimizer.
"""

import argparse
import json
import math
import sys

import numpy as np

from .baselines_sim import ALL_METHODS, SimConfig, run_comparison
from .confidence import sdr_two_sided_ci
from .error_control import ControlConfig, Preprocess, select
from .errors import OptimizerDidNotConverge, SchemaError, SignboundError
from .sdr_core import summarize
from .simultaneous import build_nested, merged_region, simultaneous_region
from .tables import read_study, write_sim_outcomes, write_sweep
from .tail_bounds import BoundProblem, hoeffding_exponent, tight_exponent

USER_ERROR = 2
NUMERICAL_ERROR = 3


def _parse_widths(text):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            raw = fh.read().replace(",", " ").split()
    else:
        raw = text.split(",")
    return [float(x) for x in raw]


def _parse_grid(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _parse_seeds(text):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def _parse_preprocess(text):
    if text is None:
        return None
    try:
        kind, value = text.split(":", 1)
        return Preprocess(kind.strip(), float(value))
    except ValueError as exc:
        raise SchemaError(f"bad --preprocess spec {text!r}: {exc}") from None


def cmd_bound(args):
    problem = BoundProblem(_parse_widths(args.widths), args.mu, args.s)
    result = tight_exponent(problem)
    print(f"log_bound = {result.log_bound!r}")
    print(f"bound = {math.exp(result.log_bound)!r}")
    print(f"t_opt = {result.t_opt!r}")
    print(f"lam_opt = {result.lam_opt!r}")
    print("means_opt = " + ",".join(format(x, ".17g") for x in result.means_opt))
    if args.alpha is not None:
        reject = math.log(args.alpha) >= result.log_bound
        print(f"reject_mean_at_most(alpha={args.alpha:g}) = {str(reject).lower()}")
    if args.compare_hoeffding:
        hoeff = hoeffding_exponent(problem)
        print(f"hoeffding_log_bound = {hoeff!r}")
        print(f"improvement = {hoeff - result.log_bound!r}")
    return 0


def _threshold_values(scores, spec):
    distinct = np.unique(scores)[::-1]
    if spec == "all-scores":
        return distinct
    if spec.startswith("grid:"):
        count = int(spec.split(":", 1)[1])
        if count < 1:
            raise SchemaError("grid threshold count must be positive")
        return np.linspace(scores.max(), scores.min(), count)
    raise SchemaError(f"bad --thresholds spec {spec!r}")


def cmd_assess(args):
    study, _ = read_study(args.study)
    if study.scores is None:
        raise SchemaError("assess requires confidence scores in the study table")
    thresholds = _threshold_values(study.scores, args.thresholds)

    simultaneous = None
    if args.simultaneous:
        nested = build_nested(study)
        if args.cuts > 1:
            region = merged_region(nested, args.alpha, args.cuts)
        else:
            region = simultaneous_region(nested, args.alpha)
        # bounds attach to rows whose subset is exactly a nested prefix
        prefix_sets = {
            int(region.sizes[k]): (float(region.uppers[k]),
                                   frozenset(nested.order[: nested.sizes[k]].tolist()))
            for k in range(nested.depth)
        }
        simultaneous = prefix_sets

    rows = []
    seen_sizes = set()
    for t in thresholds:
        subset = np.flatnonzero(study.scores >= t)
        if subset.size == 0 or subset.size in seen_sizes:
            continue
        seen_sizes.add(subset.size)
        summary = summarize(study, subset)
        ci = sdr_two_sided_ci(summary, args.alpha)
        simu = None
        if simultaneous is not None and subset.size in simultaneous:
            upper, members = simultaneous[subset.size]
            if frozenset(subset.tolist()) == members:
                simu = upper
        rows.append((subset.size, summary.sdp, ci.lower, ci.upper, simu))
    rows.sort(key=lambda r: r[0])
    write_sweep(args.out, rows)
    return 0


def cmd_control(args):
    study, param_ids = read_study(args.study)
    method = {"sdp": "sdp-point", "ci": "ci-per-subset",
              "simultaneous": "simultaneous"}[args.method]
    try:
        config = ControlConfig(
            target_v=args.target_v, q=args.q, alpha=args.alpha, method=method,
            ordering=args.ordering, preprocess=_parse_preprocess(args.preprocess),
            cuts=args.cuts,
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    result = select(study, config)
    with open(args.out, "w") as fh:
        for pos in result.selected:
            fh.write(param_ids[pos] + "\n")
    summary_path = args.summary or args.out + ".json"
    summary = {
        "method": method,
        "ordering": config.ordering,
        "target_v": args.target_v,
        "q": args.q,
        "alpha": args.alpha,
        "cuts": args.cuts,
        "preprocess": args.preprocess,
        "guarantee": result.guarantee,
        "k_star": result.k_star,
        "selected_count": int(result.selected.size),
        "trace": result.trace,
    }
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"selected {result.selected.size} parameters (k_star={result.k_star}, "
          f"guarantee={result.guarantee})")
    return 0


def cmd_simulate(args):
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for m in methods:
        if m not in ALL_METHODS:
            raise SchemaError(f"unknown method {m!r}; choose from {ALL_METHODS}")
    base = SimConfig(n=args.n, sigma=1.0, k=1.0,
                     inflated_fraction=args.inflated_fraction,
                     replicates=args.replicates)
    outcomes = []
    for seed in _parse_seeds(args.seeds):
        outcomes.extend(run_comparison(
            base, _parse_grid(args.sigma_grid), _parse_grid(args.k_grid), [seed],
            methods, target=args.target, q=args.q, alpha=args.alpha,
        ))
    outcomes.sort(key=lambda o: (o.method, o.sigma, o.k, o.seed))
    write_sim_outcomes(args.out, outcomes)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="signbound",
        description="Tail bounds and sign-disagreement error control",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="worst-case tail exponent for one instance")
    p.add_argument("--widths", required=True,
                   help="comma separated widths, or @file with one per line")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--compare-hoeffding", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("assess", help="SDP and SDR intervals along score thresholds")
    p.add_argument("--study", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.add_argument("--thresholds", default="all-scores",
                   help="'all-scores' or 'grid:N'")
    p.add_argument("--simultaneous", action="store_true",
                   help="add joint upper bounds on rows matching module prefixes")
    p.add_argument("--cuts", type=int, default=1)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("control", help="select a discovery subset at a type S target")
    p.add_argument("--study", required=True)
    p.add_argument("--target-v", type=float, required=True, dest="target_v")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--method", choices=("sdp", "ci", "simultaneous"), default="sdp")
    p.add_argument("--ordering", default=None,
                   choices=("by-parameter-score", "by-module-mean-score"),
                   help="subset nesting; defaults to the method's natural choice")
    p.add_argument("--cuts", type=int, default=1)
    p.add_argument("--preprocess", default=None,
                   help="top-k-per-module:K | top-fraction-of-modules:F | score-threshold:T")
    p.add_argument("--out", required=True)
    p.add_argument("--summary", default=None, help="JSON summary path (default OUT.json)")
    p.set_defaults(func=cmd_control)

    p = sub.add_parser("simulate", help="replicated-study benchmark grid")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--sigma-grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    p.add_argument("--k-grid", default="1,2,3,4,5,6,7,8,9,10")
    p.add_argument("--seeds", default="0", help="comma list, ranges like 0-49 allowed")
    p.add_argument("--methods", default="sdr-sdp,bh")
    p.add_argument("--target", type=float, default=0.1)
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--replicates", type=int, default=2)
    p.add_argument("--inflated-fraction", type=float, default=0.10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OptimizerDidNotConverge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except (SchemaError, SignboundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USER_ERROR


if __name__ == "__main__":
    sys.exit(main())
