"""Core building blocks: errors, suite interface, decorators and the suite factory."""

from .base import SUITE_ORDER, SuiteOutcome, Verdict, VerificationSuite
from .exceptions import LCKLabError

__all__ = ["SUITE_ORDER", "LCKLabError", "SuiteOutcome", "Verdict", "VerificationSuite"]
