"""
Suite runner: builds the run context, executes the selected suites in order
and assembles the verification report.
"""

import logging
import time
from typing import List, Optional

from lcklab.config.conventions import CONVENTIONS
from lcklab.config.settings import settings
from lcklab.core.base import Verdict
from lcklab.core.factory import SuiteFactory, get_suite_factory
from lcklab.schemas.config import RunConfig
from lcklab.schemas.report import SuiteEntry, VerificationReport
from lcklab.services.context import RunContext, build_context
from lcklab.utils.suite_logger import SuiteLogger

logger = logging.getLogger(__name__)


def context_from_config(config: RunConfig) -> RunContext:
    return build_context(
        kind=config.model.type,
        n=config.model.n,
        alpha=config.model.complex_alpha,
        lam=config.field.lam,
        quadrature=config.quadrature_rule(),
        sample_count=config.sampling.count,
        seed=config.sampling.seed,
        tol_jet=config.tolerances.jet,
        tol_quad=config.tolerances.quad,
        killing_rates=config.field.killing_rates,
        matrix=config.model.matrix,
    )


def run(config: RunConfig, factory: Optional[SuiteFactory] = None) -> VerificationReport:
    """
    Execute the suites selected by ``config``.

    A suite that raises is recorded with verdict "error" and the run moves on.
    """
    factory = factory or get_suite_factory()
    suites = factory.ordered(config.suites)
    fingerprint = CONVENTIONS.fingerprint()
    SuiteLogger.log_run_start([s.name for s in suites], config.sampling.seed, fingerprint, config.source)
    started = time.perf_counter()

    context = context_from_config(config) if suites else None
    entries: List[SuiteEntry] = []
    for suite in suites:
        SuiteLogger.log_start(suite.name, suite.paper_anchor, suite.identity)
        start_time = time.perf_counter()
        try:
            outcome = suite.execute(context)
        except Exception as exc:
            duration = time.perf_counter() - start_time
            SuiteLogger.log_error(suite.name, exc, duration)
            details = exc.to_dict() if hasattr(exc, "to_dict") else {"error": type(exc).__name__, "message": str(exc)}
            entries.append(
                SuiteEntry(
                    suite=suite.name,
                    verdict=Verdict.ERROR,
                    paper_anchor=suite.paper_anchor,
                    wall_ms=duration * 1000.0,
                    values=details,
                    detail=f"{type(exc).__name__}: {exc}",
                )
            )
            continue

        duration = time.perf_counter() - start_time
        if outcome.passed:
            SuiteLogger.log_success(suite.name, outcome.residual_max, duration)
        else:
            SuiteLogger.log_failure(suite.name, outcome.residual_max, outcome.detail, duration)
        entries.append(
            SuiteEntry(
                suite=suite.name,
                residual_max=outcome.residual_max,
                verdict=outcome.verdict,
                paper_anchor=suite.paper_anchor,
                wall_ms=duration * 1000.0,
                values=outcome.values,
                detail=outcome.detail,
            )
        )

    report = VerificationReport(
        conventions_fingerprint=fingerprint,
        seed=config.sampling.seed,
        config=config.echo(),
        entries=entries,
    )
    SuiteLogger.log_run_end(
        sum(entry.passed for entry in entries), len(entries), report.exit_code, time.perf_counter() - started
    )
    return report


def explain(report: VerificationReport) -> str:
    """Human-readable summary of a report."""
    lines = [
        f"{settings.APP_NAME} report (schema {report.schema_version}, seed {report.seed}, "
        f"conventions {report.conventions_fingerprint[:12]})"
    ]
    if not report.entries:
        lines.append("no suites run")
        return "\n".join(lines)

    width = max(len(entry.suite) for entry in report.entries)
    for entry in report.entries:
        residual = "n/a" if entry.residual_max is None else f"{entry.residual_max:.3e}"
        lines.append(f"  [{entry.verdict.value.upper():5}] {entry.suite:<{width}}  residual {residual}  {entry.paper_anchor}")
        if entry.detail and not entry.passed:
            lines.append(f"          {entry.detail}")

    key_formula = report.entry("key-formula")
    if key_formula is not None and key_formula.residual_max is not None:
        label = key_formula.paper_anchor or "key formula"
        lines.append(f"{label} residual: {key_formula.residual_max:.3e}")
    certify = report.entry("certify")
    if certify is not None and certify.verdict == Verdict.FAIL:
        legs = certify.values.get("failing_legs", [])
        lines.append(f"certify failing legs: {', '.join(legs)}")

    passed = sum(entry.passed for entry in report.entries)
    lines.append(f"{passed}/{len(report.entries)} suites passed; exit status {report.exit_code}")
    return "\n".join(lines)
