"""Command-line experiment runner.

Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, parse_config
from .homogenize import PipelineError
from .mesh_fem import SolverError
from .montecarlo import QUANTITY_KEYS, RealizationError
from .runner import run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="avhomog",
        description=(
            "Monte Carlo vs antithetic-variable estimation of apparent "
            "homogenized energy densities"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("config_path", help="flat key=value configuration file")
    run.add_argument("--output-dir", default=None, help="override output directory")
    run.add_argument("--seed", type=int, default=None, help="override config seed")
    run.add_argument("--threads", type=int, default=1, help="worker processes")
    run.add_argument(
        "--emit-plots", action="store_true", help="render PNG figures alongside the CSVs"
    )
    return parser


def _print_summary(config, reports):
    for two_n in sorted(reports):
        rep = reports[two_n]
        print(f"[{config.test_case}] 2N={two_n}")
        for key in QUANTITY_KEYS:
            q = rep.quantities[key]
            print(
                f"  {key:<12} mean={q.mc.mean:.6g} "
                f"v_mc={q.v_mc:.4g} v_av={q.v_av:.4g} R={q.ratio:.3g}"
            )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(args.config_path)
        if args.output_dir is not None:
            config.output_dir = args.output_dir
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be >= 0")
            config.seed = args.seed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        reports = run_experiment(config, threads=args.threads, emit_plots=args.emit_plots)
    except (RealizationError, PipelineError, SolverError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    _print_summary(config, reports)
    print(f"results written to {config.output_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
