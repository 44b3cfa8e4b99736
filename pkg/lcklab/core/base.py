"""
Base classes and interfaces for verification suites.

This module provides the abstract suite interface, the verdict enum and
the outcome record shared by the suite strategies and the runner.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

from lcklab.config.anchors import anchor_for


class Verdict(str, Enum):
    """Verdict values recorded for each suite."""

    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


@dataclass
class SuiteOutcome:
    """What a suite hands back to the runner."""

    residual_max: float
    passed: bool
    values: Dict[str, Any] = field(default_factory=dict)
    detail: str = ""

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.passed else Verdict.FAIL


class VerificationSuite(ABC):
    """
    Abstract base class for verification suites.

    Each suite is a strategy: the runner looks it up by its stable name,
    hands it the run context and records the outcome.
    """

    name: str = ""
    identity: str = ""
    description: str = ""

    @property
    def paper_anchor(self) -> str:
        """Report label of the identity checked, read from anchors.toml."""
        return anchor_for(self.name)

    @abstractmethod
    def execute(self, context: Any) -> SuiteOutcome:
        """Run the suite against a prepared run context."""


# Stable suite identifiers in execution order.
SUITE_ORDER = (
    "validate-lck",
    "lee-form",
    "monodromy",
    "key-formula",
    "proof-chain",
    "averaging-pipeline",
    "omega-W",
    "psi-potential",
    "certify",
    "vaisman",
)
