"""
Decorators for timing and logging engine operations and suite strategies.
"""

import logging
import time
from functools import wraps
from typing import Any, Callable, TypeVar

from lcklab.core.exceptions import LCKLabError

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


def _describe(args: tuple, kwargs: dict) -> str:
    """Short rendering of call arguments; forms and fields show their labels."""
    parts = [getattr(a, "label", None) or type(a).__name__ for a in args]
    parts += [f"{k}={getattr(v, 'label', None) or type(v).__name__}" for k, v in kwargs.items()]
    return ", ".join(parts)[:200]


def log_execution(log_args: bool = True, log_level: str = "debug"):
    """
    Log the duration of an operation.

    Engine errors (LCKLabError) are expected outcomes of a check and are
    logged at warning level with their details; anything else is logged as
    an error with the traceback. Both are re-raised.

    Args:
        log_args: Whether to log the labels of the arguments
        log_level: Logging level for the timing line
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args, **kwargs):
            name = func.__qualname__
            emit = getattr(logger, log_level)
            if log_args:
                emit(f"{name}({_describe(args, kwargs)})")
            start_time = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except LCKLabError as e:
                logger.warning(
                    f"{name} raised {type(e).__name__} after {time.perf_counter() - start_time:.4f}s: "
                    f"{e.message} {e.details or ''}"
                )
                raise
            except Exception:
                logger.exception(f"{name} failed after {time.perf_counter() - start_time:.4f}s")
                raise
            emit(f"{name} finished in {time.perf_counter() - start_time:.4f}s")
            return result

        return wrapper  # type: ignore[return-value]

    return decorator


def performance_monitor(threshold_seconds: float = 1.0):
    """Warn when a call takes longer than ``threshold_seconds``."""

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start_time
                if elapsed > threshold_seconds:
                    logger.warning(f"Slow: {func.__qualname__} took {elapsed:.2f}s (threshold {threshold_seconds}s)")

        return wrapper  # type: ignore[return-value]

    return decorator


def suite_method(log_args: bool = False, performance_threshold: float = 10.0):
    """log_execution plus performance_monitor, as every suite's execute uses them."""

    def decorator(func: F) -> F:
        return performance_monitor(performance_threshold)(log_execution(log_args=log_args)(func))

    return decorator
