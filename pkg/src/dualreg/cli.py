"""Command-line front end.

Subcommands::

    dualreg gen    --reg l1 --seed 7 --out results/      emit problem files
    dualreg run    --config cfg.json --out results/      single experiment
    dualreg sweep  --config cfg.json --out results/      SNR grid
    dualreg local  --config cfg.json --out results/      local-rate analysis
    dualreg ode    --config cfg.json --out results/      flow vs. descent

Flags override the corresponding config-file fields.  Problem dimensions not
set in the config fall back to the per-kind defaults of the experiments
module.
"""

import argparse
import os
import sys

from .experiments import (ExperimentConfig, build_problem, local_analysis,
                          ode_compare, run_experiment, snr_sweep,
                          write_problem_json)
from .solvers import DivergenceError


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--snr", type=float, dest="snr_db")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--c", type=float)
    parser.add_argument("--reg", choices=["l1", "l12", "tv1d", "nuclear"], dest="kind")
    parser.add_argument("--method", choices=["dgd", "adgd", "ode"])
    parser.add_argument("--max-iters", type=int, dest="max_iters")
    parser.add_argument("--out", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dualreg",
        description="Early-stopped dual gradient descent for low-complexity recovery")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [("gen", "generate a problem instance"),
                       ("run", "run one experiment"),
                       ("sweep", "run an SNR sweep"),
                       ("local", "local-rate analysis of a run"),
                       ("ode", "compare the gradient flow against descent")]:
        _add_common(sub.add_parser(name, help=text))
    return parser


def config_from_args(args):
    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(seed=args.seed, snr_db=args.snr_db, alpha=args.alpha,
                              theta=args.theta, c=args.c, kind=args.kind,
                              method=args.method, max_iters=args.max_iters,
                              out=args.out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        out = cfg.out or "."
        if args.command == "gen":
            os.makedirs(out, exist_ok=True)
            problem = build_problem(cfg)
            path = write_problem_json(os.path.join(out, "problem.json"), problem)
            print(path)
        elif args.command == "run":
            paths, _, report = run_experiment(cfg, out)
            print(paths["trace"])
            print(paths["report"])
            if report.interval is not None:
                lo, hi = report.interval
                print(f"consistency interval [{lo}, {hi}], oracle stop {report.k_best}")
            else:
                print(f"no consistency interval, oracle stop {report.k_best}")
        elif args.command == "sweep":
            rows, path = snr_sweep(cfg, out)
            n_ok = sum(r["consistent"] for r in rows)
            print(path)
            print(f"{n_ok}/{len(rows)} grid points model-consistent at the oracle stop")
        elif args.command == "local":
            paths, _, data = local_analysis(cfg, out)
            print(paths["trace"])
            print(paths["report"])
            if data["note"]:
                print(data["note"])
        elif args.command == "ode":
            paths, _, data = ode_compare(cfg, out)
            print(paths["report"])
            if data["overlap"]:
                print(f"interval overlap {data['overlap']}, "
                      f"sup relative deviation {data['sup_rel_deviation']:.3e}")
            else:
                print("no interval overlap")
    except DivergenceError as exc:
        print(f"solver diverged: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
