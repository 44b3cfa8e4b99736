"""
Hermitian metric attached to a 2-form.

The metric is g(X, Y) = omega(I X, Y) (see the conventions record), so its
matrix at a point is J^T W with W the antisymmetric matrix of omega.
Christoffel symbols come from exact first derivatives of g through the
Koszul formula.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import torch
from torch.func import jacfwd, vmap

from lcklab.config.settings import settings
from lcklab.core.exceptions import DegreeError, GeometryError, JetCapabilityError
from lcklab.forms.combinatorics import complex_structure_tensor
from lcklab.forms.fields import CoefficientFn, KForm, PointsLike, ScalarField, VectorField, as_points, min_smoothness
from lcklab.forms.operators import two_form_matrix
from lcklab.forms.sampling import sup_norm

logger = logging.getLogger(__name__)


def square_length(omega: KForm, X: VectorField) -> ScalarField:
    """|X|^2 = omega(I X, X) as a scalar field."""
    if omega.degree != 2:
        raise DegreeError(f"square_length needs a 2-form, got degree {omega.degree}")
    w = two_form_matrix(omega)
    j = complex_structure_tensor(omega.n)
    fx = X.components

    def value(x: torch.Tensor) -> torch.Tensor:
        a = fx(x)
        return ((j @ a) @ w(x) @ a).reshape(1)

    return ScalarField(
        n=omega.n,
        degree=0,
        coefficients=value,
        smoothness=min_smoothness(omega.smoothness, X.smoothness),
        label=f"|{X.label}|^2",
    )


@dataclass(frozen=True)
class HermitianMetric:
    omega: KForm

    def __post_init__(self) -> None:
        if self.omega.degree != 2:
            raise DegreeError(f"A Hermitian metric comes from a 2-form, got degree {self.omega.degree}")

    @property
    def n(self) -> int:
        return self.omega.n

    @property
    def dimension(self) -> int:
        return 2 * self.omega.n

    def matrix_fn(self) -> CoefficientFn:
        w = two_form_matrix(self.omega)
        jt = complex_structure_tensor(self.n).T
        return lambda x: jt @ w(x)

    def matrices(self, points: PointsLike) -> torch.Tensor:
        return vmap(self.matrix_fn())(as_points(points, self.dimension))

    def symmetry_residual(self, points: PointsLike) -> float:
        g = self.matrices(points)
        return sup_norm(g - g.transpose(-1, -2))

    def min_eigenvalues(self, points: PointsLike) -> torch.Tensor:
        g = self.matrices(points)
        return torch.linalg.eigvalsh(0.5 * (g + g.transpose(-1, -2)))[:, 0]

    def check_positive(self, points: PointsLike, threshold: Optional[float] = None) -> float:
        """Smallest eigenvalue of g over the sample; GeometryError below threshold."""
        threshold = settings.POSITIVITY_THRESHOLD if threshold is None else threshold
        batch = as_points(points, self.dimension)
        eigenvalues = self.min_eigenvalues(batch)
        worst = int(eigenvalues.argmin())
        smallest = float(eigenvalues[worst])
        if smallest <= threshold:
            raise GeometryError(
                f"Metric of '{self.omega.label}' is not positive definite",
                point=batch[worst].tolist(),
                eigenvalue=smallest,
            )
        return smallest

    def christoffel_fn(self) -> CoefficientFn:
        """x -> Gamma[k, i, j] (upper index first)."""
        if self.omega.smoothness is not None and self.omega.smoothness < 1:
            raise JetCapabilityError("Christoffel symbols need first derivatives of the metric")
        g_fn = self.matrix_fn()
        dg_fn = jacfwd(g_fn)
        m = self.dimension

        def christoffel(x: torch.Tensor) -> torch.Tensor:
            g = g_fn(x)
            dg = dg_fn(x)  # dg[i, j, l] = d_l g_ij
            # lower[l, i, j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
            lower = 0.5 * (dg.permute(1, 2, 0) + dg.permute(1, 0, 2) - dg.permute(2, 0, 1))
            return torch.linalg.solve(g, lower.reshape(m, m * m)).reshape(m, m, m)

        return christoffel

    def christoffel(self, points: PointsLike) -> torch.Tensor:
        return vmap(self.christoffel_fn())(as_points(points, self.dimension))

    def levi_civita_residual(self, points: PointsLike) -> float:
        """sup |nabla g| over the sample."""
        g_fn = self.matrix_fn()
        dg_fn = jacfwd(g_fn)
        gamma_fn = self.christoffel_fn()

        def nabla_g(x: torch.Tensor) -> torch.Tensor:
            g, dg, gamma = g_fn(x), dg_fn(x), gamma_fn(x)
            # (nabla_l g)_ij = d_l g_ij - Gamma^k_li g_kj - Gamma^k_lj g_ik
            return (
                dg.permute(2, 0, 1)
                - torch.einsum("kli,kj->lij", gamma, g)
                - torch.einsum("klj,ik->lij", gamma, g)
            )

        return sup_norm(vmap(nabla_g)(as_points(points, self.dimension)))

    def covariant_derivative_fn(self, theta: KForm) -> CoefficientFn:
        """x -> (nabla theta)[i, j] = d_i theta_j - Gamma^k_ij theta_k."""
        if theta.degree != 1:
            raise DegreeError(f"covariant derivative is implemented for 1-forms, got degree {theta.degree}")
        if theta.smoothness is not None and theta.smoothness < 1:
            raise JetCapabilityError(f"'{theta.label}' has no derivatives left")
        gamma_fn = self.christoffel_fn()
        ft = theta.coefficients
        dt = jacfwd(ft)

        def nabla(x: torch.Tensor) -> torch.Tensor:
            return dt(x).T - torch.einsum("kij,k->ij", gamma_fn(x), ft(x))

        return nabla

    def covariant_derivative(self, theta: KForm, points: PointsLike) -> torch.Tensor:
        return vmap(self.covariant_derivative_fn(theta))(as_points(points, self.dimension))

    def sharp_fn(self, theta: KForm) -> CoefficientFn:
        """x -> components of the vector dual to theta."""
        g_fn = self.matrix_fn()
        ft = theta.coefficients
        return lambda x: torch.linalg.solve(g_fn(x), ft(x))
