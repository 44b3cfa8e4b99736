"""
Exception hierarchy for LCK Lab.

Every error raised by the engine derives from LCKLabError so callers
(the suite runner in particular) can record it without catching
unrelated exceptions. Diagnostic errors carry the numbers that triggered
them.
"""

from typing import Any, Dict, List, Optional, Sequence


class LCKLabError(Exception):
    """Base class for all engine errors."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.details}


class StructuralError(LCKLabError):
    """Dimension mismatch, singular map or malformed input."""


class DegreeError(LCKLabError):
    """Operation undefined for the form degree supplied."""


class JetCapabilityError(LCKLabError):
    """Not enough derivatives left on an input for the requested operation."""


class ConfigurationError(LCKLabError):
    """Invalid configuration value, with the offending field or line."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message, field=field, line=line)
        self.field = field
        self.line = line


class DimensionError(LCKLabError):
    """Complex dimension too small for the construction."""


class ContractionError(LCKLabError):
    """Linear map is not a contraction."""

    def __init__(self, message: str, eigenvalues: Sequence[complex] = ()):
        offending: List[str] = [f"{complex(e):.6g}" for e in eigenvalues]
        super().__init__(message, eigenvalues=offending)
        self.eigenvalues = list(eigenvalues)


class NotLCKError(LCKLabError):
    """d(omega) is not theta ^ omega (or theta is not closed) within tolerance."""

    def __init__(self, message: str, residual: float, worst_point: Optional[Sequence[float]] = None):
        super().__init__(message, residual=residual, worst_point=list(worst_point or []))
        self.residual = residual
        self.worst_point = worst_point


class RankError(LCKLabError):
    """Degenerate 2-form: wedge with omega is not injective on 1-forms."""


class GeometryError(LCKLabError):
    """Metric failed positivity at a point."""

    def __init__(self, message: str, point: Optional[Sequence[float]] = None, eigenvalue: Optional[float] = None):
        super().__init__(message, point=list(point or []), eigenvalue=eigenvalue)
        self.point = point
        self.eigenvalue = eigenvalue


class PreconditionError(LCKLabError):
    """Input does not satisfy the precondition of the operation."""


class KillingError(LCKLabError):
    """Proposed Killing part does not preserve the Kähler form."""

    def __init__(self, message: str, residual: float):
        super().__init__(message, residual=residual)
        self.residual = residual


class BranchError(LCKLabError):
    """Real logarithm of a deck map is not available on the principal branch."""


class ClosednessError(LCKLabError):
    """A 1-form expected to be closed has d(theta) above tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message, residual=residual)
        self.residual = residual


class PeriodicityError(LCKLabError):
    """Flow integrand does not close up over the requested period."""

    def __init__(self, message: str, residual: float):
        super().__init__(message, residual=residual)
        self.residual = residual


class ExactnessError(LCKLabError):
    """A form expected to be exact could not be integrated."""

    def __init__(self, message: str, residual: float):
        super().__init__(message, residual=residual)
        self.residual = residual
