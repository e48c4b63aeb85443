"""
Command-line front end.

    python -m collection_sim run --profile desk --sweep 0:1:5 --seeds 10 \
        --out results/samples.csv --summary results/summary.csv

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""

import argparse
import sys
from typing import Dict, List, Optional

from collection_sim.core.config import get_settings
from collection_sim.core.constants import (
    APP_VERSION,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
)
from collection_sim.core.logging_config import get_logger, setup_logging
from collection_sim.services.harness import run_sweep, summarize
from collection_sim.utils.config_parser import ConfigError, parse_config
from collection_sim.utils.csv_writer import write_samples_csv, write_summary_csv
from collection_sim.utils.formatters import format_summary_table

logger = get_logger(__name__)

# argparse destination -> config key
FLAG_KEYS = {
    "devices": "devices",
    "corridor": "corridor",
    "radius": "radius",
    "period": "period",
    "duration": "duration",
    "variability": "variability",
    "sweep": "sweep",
    "seeds": "seeds",
    "seed_list": "seed-list",
    "source_switch": "source-switch",
    "sources": "sources",
    "algorithms": "algorithms",
    "potential": "potential",
    "flow": "flow",
    "staleness": "staleness",
    "profile": "profile",
    "workers": "workers",
    "out": "out",
    "summary": "summary",
    "window": "window",
}


class _ArgumentParser(argparse.ArgumentParser):
    """Malformed flags are configuration errors (exit code 1)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="collection_sim",
        description="Compare single-path, multi-path and weighted multi-path collection under volatility.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    subcommands = parser.add_subparsers(dest="command", required=True)

    run = subcommands.add_parser("run", help="run a variability sweep and write CSV results")
    run.add_argument("--config", help="flat key = value experiment file")
    run.add_argument("--devices", help="number of devices")
    run.add_argument("--corridor", help="corridor size as LxW meters, e.g. 200x20")
    run.add_argument("--radius", help="communication radius in meters")
    run.add_argument("--period", help="mean round period in seconds")
    run.add_argument("--duration", help="simulated seconds")
    variability = run.add_mutually_exclusive_group()
    variability.add_argument("--variability", help="single variability in [0, 1]")
    variability.add_argument("--sweep", help="variability sweep a:b:n")
    seeds = run.add_mutually_exclusive_group()
    seeds.add_argument("--seeds", help="number of seeds (1..n)")
    seeds.add_argument("--seed-list", dest="seed_list", help="explicit comma-separated seeds")
    run.add_argument("--source-switch", dest="source_switch", help="time of the right-to-left source switch, or none")
    run.add_argument("--sources", help="explicit source schedule, e.g. 0:rightmost,200:leftmost")
    run.add_argument("--algorithms", help="comma-separated subset of sp,mp,wmp")
    run.add_argument("--potential", help="oracle or bellman-ford")
    run.add_argument("--flow", help="inflow rule: named (default) or claimed")
    run.add_argument("--staleness", help="neighbour export staleness bound in seconds")
    run.add_argument("--profile", help="desk or paper")
    run.add_argument("--window", help="summary window start:end in seconds")
    run.add_argument("--out", help="sample CSV path (default samples.csv)")
    run.add_argument("--summary", help="summary CSV path (default summary.csv)")
    run.add_argument("--workers", help="parallel worker processes")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Optional[str]]:
    return {key: getattr(args, dest) for dest, key in FLAG_KEYS.items()}


def run_command(args: argparse.Namespace) -> int:
    settings = get_settings()
    try:
        plan = parse_config(
            args.config,
            _overrides(args),
            default_profile=settings.DEFAULT_PROFILE,
            default_workers=settings.DEFAULT_WORKERS,
        )
    except ConfigError as e:
        logger.error("Configuration rejected", extra={"extra_data": {"error": str(e), "key": e.key}})
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        rows = run_sweep(plan.scenario, plan.variabilities, plan.seeds, workers=plan.workers)
        summary = summarize(rows, plan.window)
        write_samples_csv(rows, plan.out or "samples.csv")
        write_summary_csv(summary, plan.summary or "summary.csv")
    except Exception as e:
        logger.error("Run failed", exc_info=True, extra={"extra_data": {"error": str(e)}})
        print(f"run failed: {e}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR

    print(format_summary_table(summary))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    setup_logging(
        level=settings.LOG_LEVEL,
        log_file=settings.LOG_FILE,
        json_format=(settings.ENVIRONMENT == "production"),
    )
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run_command(args)
    return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
