"""
Field types of the form engine.

Forms and vector fields are immutable wrappers around torch callables that
map a single point of R^{2n} to a component vector. Derivatives are never
stored: they are produced on demand by ``torch.func.jacfwd``, so a field can
be differentiated as many times as its ``smoothness`` allows and every
derivative is exact up to floating point.
"""

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import torch
from torch.func import jacfwd, vmap

from lcklab.core.exceptions import DegreeError, StructuralError
from lcklab.forms.combinatorics import (
    DTYPE,
    complex_structure_matrix,
    complex_structure_tensor,
    gather_rows,
    index_lookup,
    permutation_sign,
)

CoefficientFn = Callable[[torch.Tensor], torch.Tensor]
PointsLike = Union[torch.Tensor, np.ndarray, Sequence[float], Sequence["Point"], "Point"]


def min_smoothness(*values: Optional[int]) -> Optional[int]:
    """Combine smoothness orders; None means smooth."""
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


def reduce_smoothness(value: Optional[int], by: int = 1) -> Optional[int]:
    return None if value is None else value - by


def _pinned(values: torch.Tensor, x: torch.Tensor) -> torch.Tensor:
    # ties a constant to the evaluation point so vmap/jacfwd see a batched output
    return values + 0.0 * x[0]


@dataclass(frozen=True)
class Point:
    """A point of C^n minus the origin, in real coordinates (x_1, y_1, ..., x_n, y_n)."""

    coords: Tuple[float, ...]

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) < 2 or len(coords) % 2:
            raise StructuralError(f"Point needs an even number (>= 2) of coordinates, got {len(coords)}")
        if sum(c * c for c in coords) <= 0.0:
            raise StructuralError("The origin is excluded from the model manifold")

    @property
    def n(self) -> int:
        return len(self.coords) // 2

    @classmethod
    def from_complex(cls, values: Iterable[complex]) -> "Point":
        coords = []
        for z in values:
            coords.extend([complex(z).real, complex(z).imag])
        return cls(tuple(coords))

    def tensor(self) -> torch.Tensor:
        return torch.tensor(self.coords, dtype=DTYPE)


def as_points(points: PointsLike, m: int) -> torch.Tensor:
    """Normalize any point container into a (N, m) float64 tensor."""
    if isinstance(points, Point):
        batch = points.tensor().unsqueeze(0)
    elif isinstance(points, torch.Tensor):
        batch = points.to(DTYPE)
    elif isinstance(points, (list, tuple)) and points and isinstance(points[0], Point):
        batch = torch.stack([p.tensor() for p in points])
    else:
        batch = torch.as_tensor(np.asarray(points, dtype=float), dtype=DTYPE)
    if batch.dim() == 1:
        batch = batch.unsqueeze(0)
    if batch.dim() != 2 or batch.shape[-1] != m:
        raise StructuralError(f"Expected points of dimension {m}, got shape {tuple(batch.shape)}")
    return batch


@dataclass(frozen=True)
class KForm:
    """
    A degree-k form on an open subset of R^{2n}.

    ``coefficients`` maps one point (shape (2n,)) to the C(2n, k) components
    over strictly increasing multi-indices. Forms flagged ``is_zero`` are
    never evaluated.
    """

    n: int
    degree: int
    coefficients: CoefficientFn = field(repr=False, compare=False)
    smoothness: Optional[int] = None
    is_zero: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise StructuralError(f"Dimension n must be positive, got {self.n}")
        if not 0 <= self.degree <= 2 * self.n:
            raise DegreeError(f"Degree {self.degree} outside [0, {2 * self.n}]")

    @property
    def dimension(self) -> int:
        return 2 * self.n

    @property
    def size(self) -> int:
        return comb(self.dimension, self.degree)

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, degree: int, label: str = "0") -> "KForm":
        size = comb(2 * n, degree)
        return cls(
            n=n,
            degree=degree,
            coefficients=lambda x: torch.zeros(size, dtype=DTYPE) + 0.0 * x[0],
            is_zero=True,
            label=label,
        )

    @classmethod
    def constant(cls, n: int, degree: int, values: Sequence[float], label: str = "") -> "KForm":
        tensor = torch.as_tensor(np.asarray(values, dtype=float), dtype=DTYPE).reshape(-1)
        if tensor.numel() != comb(2 * n, degree):
            raise StructuralError(
                f"A constant {degree}-form on R^{2 * n} needs {comb(2 * n, degree)} components"
            )
        if not torch.any(tensor != 0):
            return cls.zero(n, degree, label=label or "0")
        return cls(n=n, degree=degree, coefficients=lambda x: _pinned(tensor, x), label=label)

    @classmethod
    def coordinate(cls, n: int, *axes: int) -> "KForm":
        """dx^{axes[0]} ^ ... ^ dx^{axes[-1]} in real coordinate numbering."""
        if len(set(axes)) != len(axes):
            return cls.zero(n, len(axes))
        m = 2 * n
        if any(a < 0 or a >= m for a in axes):
            raise StructuralError(f"Axis out of range for R^{m}: {axes}")
        values = np.zeros(comb(m, len(axes)))
        values[index_lookup(m, len(axes))[tuple(sorted(axes))]] = permutation_sign(tuple(axes))
        return cls.constant(n, len(axes), values, label="d" + "d".join(str(a) for a in axes))

    def _derive(
        self,
        coefficients: CoefficientFn,
        degree: Optional[int] = None,
        smoothness: Optional[int] = None,
        label: str = "",
    ) -> "KForm":
        degree = self.degree if degree is None else degree
        cls = type(self) if degree == self.degree else KForm
        return cls(n=self.n, degree=degree, coefficients=coefficients, smoothness=smoothness, label=label)

    # evaluation -------------------------------------------------------

    def at(self, point: torch.Tensor) -> torch.Tensor:
        return self.coefficients(point)

    def __call__(self, points: PointsLike) -> torch.Tensor:
        batch = as_points(points, self.dimension)
        if self.is_zero:
            return torch.zeros(batch.shape[0], self.size, dtype=DTYPE)
        return vmap(self.coefficients)(batch)

    def jacobian(self, points: PointsLike) -> torch.Tensor:
        """First derivatives of the components, shape (N, C, 2n)."""
        batch = as_points(points, self.dimension)
        if self.is_zero:
            return torch.zeros(batch.shape[0], self.size, self.dimension, dtype=DTYPE)
        return vmap(jacfwd(self.coefficients))(batch)

    def evaluate(self, points: PointsLike, vectors: torch.Tensor) -> torch.Tensor:
        """a_p(v_1, ..., v_k) for vectors of shape (N, k, 2n); returns (N,)."""
        values = self(points)
        if self.degree == 0:
            return values[:, 0]
        vectors = torch.as_tensor(vectors, dtype=DTYPE)
        if vectors.dim() == 2:
            vectors = vectors.unsqueeze(0).expand(values.shape[0], -1, -1)
        if vectors.shape[-2:] != (self.degree, self.dimension):
            raise StructuralError(
                f"Expected {self.degree} vectors of dimension {self.dimension}, got {tuple(vectors.shape)}"
            )
        columns = vectors.transpose(-1, -2)
        minors = torch.linalg.det(columns[:, gather_rows(self.dimension, self.degree), :])
        return (values * minors).sum(dim=-1)

    # arithmetic -------------------------------------------------------

    def _check_compatible(self, other: "KForm") -> None:
        if self.n != other.n:
            raise StructuralError(f"Dimension mismatch: n={self.n} vs n={other.n}")
        if self.degree != other.degree:
            raise DegreeError(f"Degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        a, b = self.coefficients, other.coefficients
        return self._derive(
            lambda x: a(x) + b(x),
            smoothness=min_smoothness(self.smoothness, other.smoothness),
            label=f"({self.label} + {other.label})",
        )

    def __neg__(self) -> "KForm":
        return self * -1.0

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, scalar: float) -> "KForm":
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        if self.is_zero or scalar == 0:
            return self._zero_like()
        a, c = self.coefficients, float(scalar)
        return self._derive(lambda x: c * a(x), smoothness=self.smoothness, label=f"{c:g}*{self.label}")

    __rmul__ = __mul__

    def _zero_like(self) -> "KForm":
        size = self.size
        return type(self)(
            n=self.n,
            degree=self.degree,
            coefficients=lambda x: torch.zeros(size, dtype=DTYPE) + 0.0 * x[0],
            is_zero=True,
            label="0",
        )


@dataclass(frozen=True)
class ScalarField(KForm):
    """A 0-form with value, gradient and Hessian (its 2-jet) on demand."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.degree != 0:
            raise DegreeError("ScalarField must have degree 0")

    @classmethod
    def from_function(
        cls,
        n: int,
        fn: Callable[[torch.Tensor], torch.Tensor],
        smoothness: Optional[int] = None,
        label: str = "",
    ) -> "ScalarField":
        return cls(n=n, degree=0, coefficients=lambda x: fn(x).reshape(1), smoothness=smoothness, label=label)

    @classmethod
    def of(cls, form: KForm) -> "ScalarField":
        if form.degree != 0:
            raise DegreeError(f"Cannot view a {form.degree}-form as a scalar field")
        if isinstance(form, ScalarField):
            return form
        return cls(
            n=form.n,
            degree=0,
            coefficients=form.coefficients,
            smoothness=form.smoothness,
            is_zero=form.is_zero,
            label=form.label,
        )

    def value(self, points: PointsLike) -> torch.Tensor:
        return self(points)[:, 0]

    def gradient(self, points: PointsLike) -> torch.Tensor:
        return self.jacobian(points)[:, 0, :]


@dataclass(frozen=True)
class VectorField:
    """A vector field on R^{2n}; ``generator`` is set for linear fields z -> G z."""

    n: int
    components: CoefficientFn = field(repr=False, compare=False)
    smoothness: Optional[int] = None
    is_zero: bool = False
    generator: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    label: str = ""

    @property
    def dimension(self) -> int:
        return 2 * self.n

    @property
    def is_linear(self) -> bool:
        return self.generator is not None

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls.linear(np.zeros((2 * n, 2 * n)), label="0")

    @classmethod
    def linear(cls, matrix: np.ndarray, label: str = "") -> "VectorField":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise StructuralError(f"Linear field needs a square even-sized matrix, got {matrix.shape}")
        tensor = torch.tensor(matrix, dtype=DTYPE)
        return cls(
            n=matrix.shape[0] // 2,
            components=lambda x: tensor @ x,
            is_zero=not np.any(matrix),
            generator=matrix,
            label=label,
        )

    def at(self, point: torch.Tensor) -> torch.Tensor:
        return self.components(point)

    def __call__(self, points: PointsLike) -> torch.Tensor:
        batch = as_points(points, self.dimension)
        return vmap(self.components)(batch)

    def jacobian(self, points: PointsLike) -> torch.Tensor:
        batch = as_points(points, self.dimension)
        return vmap(jacfwd(self.components))(batch)

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.n != other.n:
            raise StructuralError(f"Dimension mismatch: n={self.n} vs n={other.n}")
        if self.is_linear and other.is_linear:
            return VectorField.linear(self.generator + other.generator, label=f"({self.label} + {other.label})")
        a, b = self.components, other.components
        return VectorField(
            n=self.n,
            components=lambda x: a(x) + b(x),
            smoothness=min_smoothness(self.smoothness, other.smoothness),
            label=f"({self.label} + {other.label})",
        )

    def scaled(self, c: float) -> "VectorField":
        if self.is_linear:
            return VectorField.linear(c * self.generator, label=f"{c:g}*{self.label}")
        a = self.components
        return VectorField(n=self.n, components=lambda x: c * a(x), smoothness=self.smoothness, label=f"{c:g}*{self.label}")

    def apply_I(self) -> "VectorField":
        """The companion field I X."""
        if self.is_linear:
            return VectorField.linear(complex_structure_matrix(self.n) @ self.generator, label=f"I({self.label})")
        j = complex_structure_tensor(self.n)
        a = self.components
        return VectorField(n=self.n, components=lambda x: j @ a(x), smoothness=self.smoothness, label=f"I({self.label})")
