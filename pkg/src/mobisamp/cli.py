"""Command-line entry point.

    mobisamp list
    mobisamp validate --config FILE
    mobisamp run EXPERIMENT [--config FILE] [--seed N] [--out DIR]

Exit status: 0 when every declared tolerance passes, 1 when any metric
fails, 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import EXPERIMENT_SPECS, default_config, parse_config
from .errors import ConfigError, MobisampError
from .experiments import available_experiments, run

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobisamp",
        description="Sampling and reconstruction experiments for "
                    "bandlimited fields observed by static and moving "
                    "sensors.")
    sub = parser.add_subparsers(dest="command")

    run_p = sub.add_parser("run", help="execute one experiment recipe")
    run_p.add_argument("experiment", help="recipe name (see 'mobisamp list')")
    run_p.add_argument("--config", help="YAML config file")
    run_p.add_argument("--seed", type=int, help="override the config seed")
    run_p.add_argument("--out", help="override the output directory")

    sub.add_parser("list", help="list available experiment recipes")

    val_p = sub.add_parser("validate", help="check a config file")
    val_p.add_argument("--config", required=True, help="YAML config file")
    return parser


def _load_config(args) -> "ExperimentConfig":
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError("cannot read config file %s: %s"
                              % (args.config, exc)) from exc
        config = parse_config(text)
    else:
        config = default_config(args.experiment, seed=args.seed or 0)
    if args.seed is not None and config.seed != args.seed:
        config = replace(config, seed=args.seed)
    if args.out is not None:
        config = replace(config, output=args.out)
    return config


def _cmd_run(args) -> int:
    config = _load_config(args)
    report = run(args.experiment, config)
    out = args.out or config.output or "runs/%s" % args.experiment
    for row in report.metrics:
        state = "PASS" if row.passed else "FAIL"
        print("%s  %-28s value=%.6g target=%.6g tol=%g (%s)"
              % (state, row.name, row.value, row.target, row.tolerance,
                 row.comparison))
    print("report: %s/report.csv" % out)
    return 0 if report.passed else 1


def _cmd_list() -> int:
    width = max(len(name) for name in EXPERIMENT_SPECS)
    for name in available_experiments():
        spec = EXPERIMENT_SPECS[name]
        print("%-*s  %s" % (width, name, spec["description"]))
    return 0


def _cmd_validate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("cannot read config file %s: %s"
                          % (args.config, exc)) from exc
    config = parse_config(text)
    print("config OK: experiment=%s seed=%d trials=%d"
          % (config.experiment, config.seed, config.resolved_trials))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list":
            return _cmd_list()
        return _cmd_validate(args)
    except (ConfigError, MobisampError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
