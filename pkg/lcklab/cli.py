"""
Command-line interface.

    lcklab run <config.toml> [--samples N] [--quadrature-n N] [--seed S]
                             [--tol-jet T] [--tol-quad T] [--out PATH]
    lcklab explain <report.json>
    lcklab list-suites

Exit status: 0 when every suite passes, 1 when any suite fails or errors,
2 on configuration or input errors.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from lcklab.config.logging_config import logger, setup_logging
from lcklab.config.settings import Settings, settings
from lcklab.core.exceptions import LCKLabError
from lcklab.core.factory import get_suite_factory
from lcklab.schemas.config import RunConfig
from lcklab.schemas.report import VerificationReport
from lcklab.services.runner import explain, run
from lcklab.utils.suite_logger import log_system_event

EXIT_CONFIG_ERROR = 2
REPORT_FILENAME = "report.json"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcklab", description=f"{settings.APP_NAME}: numerical LCK geometry verification")
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.VERSION}")
    parser.add_argument("--log-level", help="Override LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="Run verification suites from a TOML config")
    run_parser.add_argument("config", help="Path to the run configuration")
    run_parser.add_argument("--samples", type=int, help="Number of sample points")
    run_parser.add_argument("--quadrature-n", type=int, help="Quadrature node count")
    run_parser.add_argument("--seed", type=int, help="Sampling seed")
    run_parser.add_argument("--tol-jet", type=float, help="Tolerance for jet-exact residuals")
    run_parser.add_argument("--tol-quad", type=float, help="Tolerance for quadrature-limited residuals")
    run_parser.add_argument("--out", help="Report path (a directory or a .json file)")

    explain_parser = subparsers.add_parser("explain", help="Summarize a saved report")
    explain_parser.add_argument("report", help="Path to a report JSON file")

    subparsers.add_parser("list-suites", help="List suite names and what they check")
    return parser


def report_path(out: Optional[str]) -> Path:
    """Resolve --out; without it the report lands in OUTPUT_DIR (read from the environment each call)."""
    target = Path(out) if out else Path(Settings().OUTPUT_DIR)
    if target.suffix == ".json":
        return target
    return target / REPORT_FILENAME


def command_run(args: argparse.Namespace) -> int:
    config = RunConfig.from_toml(args.config).with_overrides(
        samples=args.samples,
        quadrature_n=args.quadrature_n,
        seed=args.seed,
        tol_jet=args.tol_jet,
        tol_quad=args.tol_quad,
    )
    report = run(config)
    saved = report.save(str(report_path(args.out)))
    log_system_event("Report written", str(saved))
    print(explain(report))
    print(f"report written to {saved}")
    return report.exit_code


def command_explain(args: argparse.Namespace) -> int:
    path = Path(args.report)
    if not path.exists():
        raise LCKLabError(f"Report not found: {path}", path=str(path))
    report = VerificationReport.load(str(path))
    print(explain(report))
    return 0


def command_list_suites(args: argparse.Namespace) -> int:
    suites = get_suite_factory().get_all_suites()
    width = max(len(suite.name) for suite in suites)
    for suite in suites:
        print(f"{suite.name:<{width}}  {suite.paper_anchor:<8}  {suite.identity}")
    return 0


COMMANDS = {
    "run": command_run,
    "explain": command_explain,
    "list-suites": command_list_suites,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level)
    try:
        return COMMANDS[args.command](args)
    except LCKLabError as e:
        logger.error(f"❌ {type(e).__name__} | {e.message} | {e.details}")
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
