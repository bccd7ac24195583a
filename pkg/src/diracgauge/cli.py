"""Command-line front end.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
invalid input (bad flags, unreadable or malformed config).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .suite import GROUPS, ConfigError, ScenarioConfig, dump_operator, emit_report, parse_config, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario file of [section] key = value lines")
    common.add_argument("--seed", type=int, help="global seed (unsigned 64-bit)")
    common.add_argument("--out", default=None, help="report path, '-' for standard output")
    common.add_argument("--json", action="store_true", help="print the JSON report to standard output")
    common.add_argument("--tolerance-scale", type=float, default=None, help="multiply every tolerance")
    common.add_argument("--timing", action="store_true", help="record wall times (breaks byte-identity)")

    parser = argparse.ArgumentParser(prog="diracgauge", description="Dirac-type operator verification suite")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in GROUPS + ("suite",):
        p = sub.add_parser(name, parents=[common], help=f"run the {name} checks")
        if name == "blw":
            p.add_argument("--dump", type=Path, help="also write the lattice operator as triplets")
    return parser


def _load_config(args) -> ScenarioConfig:
    cfg = ScenarioConfig()
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        cfg = parse_config(text)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.tolerance_scale is not None:
        cfg.tolerance_scale = args.tolerance_scale
    cfg.validate()
    return cfg


def _print_table(report) -> None:
    width = max((len(r.name) for r in report.records), default=10)
    for r in report.records:
        print(f"{r.status.upper():4}  {r.name:<{width}}  {r.residual:<12.4g} {r.relation} {r.tolerance:.3g}")
    s = report.summary
    print(f"{s['passed']}/{s['total']} checks passed")


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _load_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    groups = None if args.command == "suite" else (args.command,)
    report = run_suite(cfg, groups, timing=args.timing)
    if getattr(args, "dump", None) is not None:
        dump_operator(cfg, args.dump)
    try:
        if args.out is not None:
            emit_report(report, args.out)
        if args.json and args.out != "-":
            emit_report(report, "-")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.json and args.out != "-":
        _print_table(report)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
