"""
Factory for verification suite strategies.

Suites are registered once under their stable names; the runner asks the
factory for them in execution order.
"""

from functools import lru_cache
from typing import Dict, Iterable, List

from lcklab.core.base import SUITE_ORDER, VerificationSuite
from lcklab.core.exceptions import ConfigurationError
from lcklab.services.strategies.suites import SUITE_CLASSES


class SuiteFactory:
    """
    Factory class for verification suites.

    Holds one instance per suite and hands them out by name.
    """

    def __init__(self):
        self._suites: Dict[str, VerificationSuite] = {cls.name: cls() for cls in SUITE_CLASSES}

    def get_suite(self, suite_name: str) -> VerificationSuite:
        """
        Get a verification suite by name.

        Args:
            suite_name: Stable suite identifier, e.g. "key-formula"

        Returns:
            Suite instance

        Raises:
            ConfigurationError: If the suite name is not recognized
        """
        if suite_name not in self._suites:
            raise ConfigurationError(f"Unknown suite: {suite_name}", field="suites")
        return self._suites[suite_name]

    def get_all_suites(self) -> List[VerificationSuite]:
        """Get all suites in execution order."""
        return [self._suites[name] for name in SUITE_ORDER]

    def ordered(self, suite_names: Iterable[str]) -> List[VerificationSuite]:
        """Selected suites, deduplicated and sorted into execution order."""
        selected = {self.get_suite(name).name for name in suite_names}
        return [self._suites[name] for name in SUITE_ORDER if name in selected]


@lru_cache()
def get_suite_factory() -> SuiteFactory:
    """Get the global suite factory instance."""
    return SuiteFactory()
