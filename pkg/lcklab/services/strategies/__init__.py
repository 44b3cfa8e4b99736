from .suites import SUITE_CLASSES

__all__ = ["SUITE_CLASSES"]
