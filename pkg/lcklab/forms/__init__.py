"""Form engine: exact pointwise exterior calculus on C^n minus the origin."""

from .fields import KForm, Point, ScalarField, VectorField, as_points
from .operators import (
    apply_I,
    d_c,
    ddc,
    exterior_d,
    interior_product,
    lie_derivative,
    lie_derivative_power,
    multiply,
    wedge,
)
from .sampling import sample_points, sample_vectors

__all__ = [
    "KForm",
    "Point",
    "ScalarField",
    "VectorField",
    "as_points",
    "apply_I",
    "d_c",
    "ddc",
    "exterior_d",
    "interior_product",
    "lie_derivative",
    "lie_derivative_power",
    "multiply",
    "wedge",
    "sample_points",
    "sample_vectors",
]
