"""Command-line entry point: ``jetrope <suite> [options]``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import ConfigError, SUITE_NAMES, SuiteConfig, config_load, validate
from .suites import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetrope",
        description="Run a verification or probe suite and write CSV, "
                    "markdown and figure reports.")
    parser.add_argument("suite", choices=SUITE_NAMES,
                        help="which suite to run")
    parser.add_argument("--config", metavar="PATH",
                        help="configuration file (defaults apply when omitted)")
    parser.add_argument("--out", metavar="DIR",
                        help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, metavar="N",
                        help="seed (overrides the config)")
    parser.add_argument("--methods", metavar="a,b,c",
                        help="comma-separated method list (overrides the config)")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering; CSV and markdown only")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            config = config_load(args.config, suite=args.suite)
        else:
            config = SuiteConfig(suite=args.suite)
        overrides = {}
        if args.out is not None:
            overrides["out"] = args.out
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.methods is not None:
            overrides["methods"] = tuple(
                m.strip() for m in args.methods.split(",") if m.strip())
        if args.no_figures:
            overrides["figures"] = False
        if overrides:
            config = validate(dataclasses.replace(config, **overrides))
        result = run(config)
    except ConfigError as exc:
        print(f"jetrope: {exc}", file=sys.stderr)
        return 2
    for path in result.files:
        print(path)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
