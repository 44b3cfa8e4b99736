"""Pydantic schemas for run configs and verification reports."""

from .config import RunConfig
from .report import SuiteEntry, VerificationReport

__all__ = ["RunConfig", "SuiteEntry", "VerificationReport"]
