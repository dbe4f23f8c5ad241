"""Command-line runner: ``holosurf {sweep,single,noise}``."""

import argparse
import logging
import sys

from .config import ConfigError, ExperimentConfig, load_config
from .experiment import run_noise_study, run_single, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holosurf", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML experiment config (defaults apply when omitted)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", help="output directory (overrides output_dir)")
    common.add_argument("--quiet", action="store_true", help="suppress progress and summary output")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="DOA sweep over the configured angles")
    single = sub.add_parser("single", parents=[common], help="one DOA with spectrum/hologram/phase dumps")
    single.add_argument("--theta", type=float, help="true DOA in degrees")
    sub.add_parser("noise", parents=[common], help="recovery error versus object-field noise")
    return parser


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigError("seed", "must fit in an unsigned 64-bit integer")
        cfg.seed = args.seed
    if args.out is not None:
        cfg.output_dir = args.out
    if getattr(args, "theta", None) is not None:
        cfg.source.theta_deg = args.theta
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")

    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "sweep":
            report = run_sweep(cfg)
            summary = f"{len(report.rows)} angles, max |err| {report.max_abs_error:.4f} deg, rmse {report.rmse:.4f} deg"
        elif args.command == "single":
            res = run_single(cfg)
            summary = f"true {res.theta_deg:g} deg, estimated {res.est_deg:.4f} deg"
        else:
            rows = run_noise_study(cfg)
            summary = f"{len(rows)} noise levels, {cfg.noise.trials} trials each"
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, ArithmeticError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if not args.quiet:
        print(summary)
        print(f"outputs in {cfg.output_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
