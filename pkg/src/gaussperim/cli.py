"""Command line front end for experiment configs and verification suites.

Exit codes: 0 when every verdict passed, 1 when a verification verdict
failed, 2 for an invalid config or usage error, 3 for a numerical
failure inside an estimator.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import List, Optional

from . import __version__
from .config import load_config
from .errors import ConfigError, NumericalError
from .harness import SUITES, ResultRecord, run, verify_suite

_TASK_COMMANDS = ("perimeter", "classify", "rho", "run")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to a TOML config")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--out", default=".",
                        help="directory for results.jsonl and results.csv")
    parser.add_argument("--budget-scale", type=float, default=1.0,
                        help="multiply sampling budgets by this factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussperim",
        description="Gaussian perimeter and surface-measure experiments",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, blurb in (
        ("perimeter", "run a perimeter config"),
        ("classify", "run a boundary-classification config"),
        ("rho", "run a slice-profile config"),
        ("run", "run a config of any task"),
    ):
        _add_common(sub.add_parser(name, help=blurb))

    verify = sub.add_parser("verify", help="run a named verification suite")
    verify.add_argument("suite", choices=list(SUITES))
    verify.add_argument("--out", default=".",
                        help="directory for results.jsonl and results.csv")
    verify.add_argument("--budget-scale", type=float, default=1.0,
                        help="multiply sampling budgets by this factor")
    return parser


def _print_record(rec: ResultRecord) -> None:
    print(f"task={rec.task} seed={rec.seed} digest={rec.config_digest[:12]}")
    for name, out in rec.outputs.items():
        if out["stderr"] is None:
            print(f"  {name} = {out['value']:.6g}")
        else:
            print(f"  {name} = {out['value']:.6g} +/- {out['stderr']:.2g}")
    for name, v in rec.verdicts.items():
        status = "PASS" if v["passed"] else "FAIL"
        print(f"  [{status}] {name}: observed={v['observed']} "
              f"tolerance={v['tolerance']}")
    print(f"  wall={rec.wall_clock_s:.2f}s "
          f"{'PASS' if rec.passed else 'FAIL'}")


def _run_task(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.command != "run" and cfg.task != args.command:
        raise ConfigError(
            f"config task {cfg.task!r} does not match subcommand {args.command!r}"
        )
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        cfg = replace(cfg, seed=args.seed)
    if args.budget_scale != 1.0:
        cfg = cfg.scaled(args.budget_scale)
    rec = run(cfg, out=args.out)
    _print_record(rec)
    return 0 if rec.passed else 1


def _run_verify(args: argparse.Namespace) -> int:
    records = verify_suite(args.suite, out=args.out,
                           budget_scale=args.budget_scale)
    for rec in records:
        _print_record(rec)
    n_pass = sum(1 for r in records if r.passed)
    print(f"suite {args.suite}: {n_pass}/{len(records)} records passed")
    return 0 if n_pass == len(records) else 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in _TASK_COMMANDS:
            return _run_task(args)
        return _run_verify(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
