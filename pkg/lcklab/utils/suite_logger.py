"""
Centralized suite logging utilities for run tracking and error reporting.
"""

import traceback
from typing import Iterable, Optional

from lcklab.config.logging_config import logger


class SuiteLogger:
    """Centralized suite logging utility"""

    @staticmethod
    def log_run_start(suites: Iterable[str], seed: int, fingerprint: str, source: Optional[str] = None):
        """Log the start of a verification run"""
        names = list(suites)
        logger.info(
            f"🚀 RUN | Config: {source or 'inline'} | "
            f"Suites: {len(names)} ({', '.join(names) or 'none'}) | "
            f"Seed: {seed} | Conventions: {fingerprint[:12]}"
        )

    @staticmethod
    def log_start(suite: str, anchor: str, identity: str = ""):
        """Log a suite starting"""
        logger.info(f"▶️ SUITE | {suite} | {anchor} | {identity}")

    @staticmethod
    def log_success(suite: str, residual: Optional[float], duration: float = 0):
        """Log a passing suite"""
        logger.info(f"✅ PASS | {suite} | Residual: {_format(residual)} | Duration: {duration:.3f}s")

    @staticmethod
    def log_failure(suite: str, residual: Optional[float], detail: str = "", duration: float = 0):
        """Log a failing suite"""
        detail_info = f" | {detail}" if detail else ""
        logger.warning(f"❌ FAIL | {suite} | Residual: {_format(residual)}{detail_info} | Duration: {duration:.3f}s")

    @staticmethod
    def log_error(suite: str, error: Exception, duration: float = 0):
        """Log a suite that raised"""
        error_type = type(error).__name__
        logger.error(f"💥 ERROR | {suite} | Error: {error_type} - {error} | Duration: {duration:.3f}s")

        # Log full traceback for debugging
        logger.debug(f"Full traceback for {suite}: {traceback.format_exc()}")

    @staticmethod
    def log_diagnostic(suite: str, message: str):
        """Log a non-fatal diagnostic raised while a suite runs"""
        logger.warning(f"⚠️ DIAGNOSTIC | {suite} | {message}")

    @staticmethod
    def log_run_end(passed: int, total: int, exit_code: int, duration: float = 0):
        """Log the end of a verification run"""
        logger.info(f"🏁 RUN COMPLETE | {passed}/{total} passed | Exit: {exit_code} | Duration: {duration:.3f}s")


def log_system_event(event: str, details: str = ""):
    """Log system events"""
    logger.info(f"⚙️ SYSTEM | {event} | {details}")


def _format(residual: Optional[float]) -> str:
    return "n/a" if residual is None else f"{residual:.3e}"
