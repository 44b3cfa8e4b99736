"""
Linear maps, their flows and circle actions on R^{2n} = C^n.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import torch
from scipy.linalg import expm

from lcklab.config.settings import settings
from lcklab.core.exceptions import PeriodicityError, StructuralError
from lcklab.forms.combinatorics import DTYPE, complex_structure_matrix
from lcklab.forms.fields import VectorField

logger = logging.getLogger(__name__)

COMPLEX_LINEAR_TOLERANCE = 1e-12
SINGULAR_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A real 2n x 2n matrix acting on coordinates (x_1, y_1, ..., x_n, y_n)."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise StructuralError(f"LinearMap needs a square even-sized matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise StructuralError("LinearMap matrix has non-finite entries")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(np.eye(2 * n), label="Id")

    @classmethod
    def scalar(cls, n: int, alpha: complex) -> "LinearMap":
        """Multiplication by a complex scalar on every coordinate."""
        return cls.from_complex(np.eye(n) * complex(alpha), label=f"{complex(alpha):g}*Id")

    @classmethod
    def from_complex(cls, matrix: Sequence[Sequence[complex]], label: str = "") -> "LinearMap":
        """Realify a complex n x n matrix: a + ib becomes [[a, -b], [b, a]]."""
        c = np.asarray(matrix, dtype=complex)
        n = c.shape[0]
        real = np.zeros((2 * n, 2 * n))
        real[0::2, 0::2] = c.real
        real[0::2, 1::2] = -c.imag
        real[1::2, 0::2] = c.imag
        real[1::2, 1::2] = c.real
        return cls(real, label=label)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def is_complex_linear(self) -> bool:
        j = complex_structure_matrix(self.n)
        return float(np.abs(self.matrix @ j - j @ self.matrix).max()) <= COMPLEX_LINEAR_TOLERANCE

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def is_invertible(self) -> bool:
        return bool(np.linalg.cond(self.matrix) < SINGULAR_CONDITION)

    def require_invertible(self) -> None:
        if not self.is_invertible:
            raise StructuralError(f"Linear map '{self.label}' is singular")

    def complex_matrix(self) -> np.ndarray:
        """The n x n complex matrix of a complex-linear map."""
        if not self.is_complex_linear:
            raise StructuralError(f"Linear map '{self.label}' does not commute with I")
        return self.matrix[0::2, 0::2] + 1j * self.matrix[1::2, 0::2]

    def eigenvalues(self) -> np.ndarray:
        """Complex eigenvalues (n of them when complex-linear, 2n otherwise)."""
        if self.is_complex_linear:
            return np.linalg.eigvals(self.complex_matrix())
        return np.linalg.eigvals(self.matrix)

    def spectral_radius(self) -> float:
        return float(np.abs(self.eigenvalues()).max())

    def is_similarity(self, tolerance: float = COMPLEX_LINEAR_TOLERANCE) -> bool:
        """True for alpha * Id with a complex alpha."""
        if not self.is_complex_linear:
            return False
        c = self.complex_matrix()
        return float(np.abs(c - c[0, 0] * np.eye(self.n)).max()) <= tolerance

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        if other.n != self.n:
            raise StructuralError(f"Dimension mismatch: n={self.n} vs n={other.n}")
        return LinearMap(self.matrix @ other.matrix, label=f"{self.label}.{other.label}")

    def inverse(self) -> "LinearMap":
        self.require_invertible()
        return LinearMap(np.linalg.inv(self.matrix), label=f"{self.label}^-1")

    def power(self, k: int) -> "LinearMap":
        if k < 0:
            return self.inverse().power(-k)
        return LinearMap(np.linalg.matrix_power(self.matrix, k), label=f"{self.label}^{k}")

    def tensor(self) -> torch.Tensor:
        return torch.tensor(self.matrix, dtype=DTYPE)

    def as_field(self) -> VectorField:
        """The linear vector field z -> M z."""
        return VectorField.linear(self.matrix, label=self.label)


@dataclass(frozen=True)
class LinearFlow:
    """t -> exp(t G) for the linear field z -> G z."""

    generator: LinearMap

    @property
    def n(self) -> int:
        return self.generator.n

    def at(self, t: float) -> LinearMap:
        return LinearMap(expm(float(t) * self.generator.matrix), label=f"exp({t:g}*{self.generator.label})")

    def matrices(self, times: Sequence[float]) -> np.ndarray:
        """(N, 2n, 2n) stack of exp(t G)."""
        return np.stack([expm(float(t) * self.generator.matrix) for t in times])

    def field(self) -> VectorField:
        return self.generator.as_field()

    def scaled(self, c: float) -> "LinearFlow":
        return LinearFlow(LinearMap(c * self.generator.matrix, label=f"{c:g}*{self.generator.label}"))


@dataclass(frozen=True)
class CircleAction:
    """
    A linear flow closing up after ``period``.

    exp(period * G) is either the identity or the stored deck map, so each
    orbit is a loop on the quotient C^n minus 0 / <deck>.
    """

    flow: LinearFlow
    period: float
    deck: Optional[LinearMap] = None
    label: str = ""

    def __post_init__(self) -> None:
        if not self.period > 0:
            raise StructuralError(f"Circle action period must be positive, got {self.period}")
        target = self.deck.matrix if self.deck is not None else np.eye(2 * self.flow.n)
        closing = self.flow.at(self.period).matrix
        residual = float(np.abs(closing - target).max())
        if residual > settings.TOL_EXACT * max(1.0, float(np.abs(target).max())):
            raise PeriodicityError(
                f"exp(T G) differs from the {'deck map' if self.deck is not None else 'identity'} "
                f"for circle action '{self.label}'",
                residual=residual,
            )
        logger.debug(f"Circle action '{self.label}' closes up with residual {residual:.3e}")

    @property
    def n(self) -> int:
        return self.flow.n

    @property
    def generator(self) -> LinearMap:
        return self.flow.generator

    def field(self) -> VectorField:
        return self.flow.field()

    def reparametrized(self, c: float) -> "CircleAction":
        """Same orbits traversed at speed c: generator c G, period T / c."""
        if not c > 0:
            raise StructuralError(f"Reparametrization speed must be positive, got {c}")
        return CircleAction(self.flow.scaled(c), self.period / c, self.deck, label=f"{self.label}@{c:g}")
