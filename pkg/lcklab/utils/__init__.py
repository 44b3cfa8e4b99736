from .suite_logger import SuiteLogger, log_system_event

__all__ = ["SuiteLogger", "log_system_event"]
