"""
Quadrature rules for flow integrals.

The composite trapezoid rule on a periodic interval is spectrally accurate
for smooth periodic integrands and is the default for circle averages and
loop integrals. Gauss-Legendre covers integrals whose integrand does not
close up at the endpoints.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from lcklab.config.settings import settings
from lcklab.core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class QuadratureScheme(str, Enum):
    TRAPEZOID = "trapezoid"
    GAUSS_LEGENDRE = "gauss_legendre"


@dataclass(frozen=True)
class QuadratureRule:
    n: int
    scheme: QuadratureScheme = QuadratureScheme.TRAPEZOID

    def __post_init__(self) -> None:
        if self.n < settings.MIN_QUADRATURE_N:
            raise ConfigurationError(
                f"Quadrature needs at least {settings.MIN_QUADRATURE_N} nodes, got {self.n}",
                field="quadrature_n",
            )
        object.__setattr__(self, "scheme", QuadratureScheme(self.scheme))

    def nodes(self, start: float, end: float) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on [start, end]."""
        length = end - start
        if self.scheme is QuadratureScheme.TRAPEZOID:
            h = length / self.n
            return start + h * np.arange(self.n), np.full(self.n, h)
        x, w = np.polynomial.legendre.leggauss(self.n)
        return start + 0.5 * length * (x + 1.0), 0.5 * length * w

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray], start: float, end: float) -> float:
        """Apply the rule to a vectorized scalar function."""
        t, w = self.nodes(start, end)
        return float(np.dot(w, fn(t)))

    def with_scheme(self, scheme: QuadratureScheme) -> "QuadratureRule":
        return QuadratureRule(self.n, scheme)

    def to_dict(self) -> dict:
        return {"n": self.n, "scheme": self.scheme.value}
