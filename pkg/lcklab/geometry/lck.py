"""
Locally conformally Kähler structures.

An LCK structure is a Hermitian 2-form omega with d(omega) = theta ^ omega
for a closed 1-form theta (the Lee form). Wedge with omega is injective on
1-forms once n >= 2, so theta is recovered pointwise by least squares and
differentiated through the normal equations.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Optional

import torch

from lcklab.config.conventions import CONVENTIONS
from lcklab.config.settings import settings
from lcklab.core.exceptions import (
    DegreeError,
    DimensionError,
    GeometryError,
    NotLCKError,
    RankError,
    StructuralError,
)
from lcklab.flows.actions import pullback
from lcklab.flows.linear import LinearMap
from lcklab.forms.combinatorics import wedge_table
from lcklab.forms.fields import KForm, PointsLike, ScalarField, as_points, reduce_smoothness
from lcklab.forms.operators import apply_I, exterior_d, multiply, wedge
from lcklab.forms.sampling import form_residual, form_residual_with_point, sup_norm
from lcklab.geometry.metric import HermitianMetric

logger = logging.getLogger(__name__)

RANK_RATIO = 1e-10


@dataclass(frozen=True)
class LCKResiduals:
    """Sup-norm diagnostics over the validation sample."""

    defining: float
    closedness: float
    i_invariance: float
    min_eigenvalue: float
    sample_count: int

    def to_dict(self) -> Dict[str, float]:
        return {
            "defining": self.defining,
            "closedness": self.closedness,
            "i_invariance": self.i_invariance,
            "min_eigenvalue": self.min_eigenvalue,
            "sample_count": self.sample_count,
        }


@dataclass(frozen=True)
class LCKStructure:
    omega: KForm
    theta: KForm
    residuals: Optional[LCKResiduals] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self) -> None:
        if self.omega.degree != 2 or self.theta.degree != 1:
            raise DegreeError(
                f"LCK structure needs a 2-form and a 1-form, got degrees {self.omega.degree}, {self.theta.degree}"
            )
        if self.omega.n != self.theta.n:
            raise StructuralError("omega and theta live on different dimensions")

    @property
    def n(self) -> int:
        return self.omega.n

    @property
    def metric(self) -> HermitianMetric:
        return HermitianMetric(self.omega)

    @property
    def is_validated(self) -> bool:
        return self.residuals is not None


@dataclass(frozen=True)
class WeightCharacter:
    """Positive character of the deck group, keyed by generator name."""

    values: Dict[str, float]

    def __post_init__(self) -> None:
        for name, value in self.values.items():
            if not value > 0:
                raise StructuralError(f"Character value for '{name}' must be positive, got {value}")

    @classmethod
    def of_deck(cls, deck: LinearMap, name: str = "A") -> "WeightCharacter":
        """chi(A) = |det_R A|^{1/n}, the pullback scale of a flat Kähler form for similarities."""
        return cls({name: abs(deck.determinant) ** (1.0 / deck.n)})

    def __call__(self, word: Iterable[str]) -> float:
        """chi of a composition of generators, e.g. ["A", "A"]."""
        value = 1.0
        for name in word:
            if name not in self.values:
                raise StructuralError(f"Unknown deck generator '{name}'")
            value *= self.values[name]
        return value

    def power(self, name: str, k: int) -> float:
        return self.values[name] ** k


@dataclass(frozen=True)
class LeeFormResult:
    theta: KForm
    residual: float
    worst_point: Optional[torch.Tensor] = field(default=None, compare=False)
    min_singular_ratio: float = 0.0


def lee_form_of(omega: KForm) -> KForm:
    """
    Pointwise least-squares Lee form, theta = (B^T B)^{-1} B^T d(omega).

    B[K, i] = (dx^i ^ omega)_K. No checks are run here; use
    ``extract_lee_form`` for a validated result.
    """
    n = omega.n
    if n < 2:
        raise DimensionError("The Lee form is only determined for complex dimension n >= 2")
    table = wedge_table(2 * n, 1, 2)
    fo = omega.coefficients
    fd = exterior_d(omega).coefficients

    def theta(x: torch.Tensor) -> torch.Tensor:
        b = torch.einsum("kij,j->ki", table, fo(x))
        return torch.linalg.solve(b.T @ b, b.T @ fd(x))

    return KForm(n=n, degree=1, coefficients=theta, smoothness=reduce_smoothness(omega.smoothness), label=f"theta[{omega.label}]")


def wedge_operator_singular_ratio(omega: KForm, points: PointsLike) -> torch.Tensor:
    """Per-point sigma_min / sigma_max of a -> a ^ omega on 1-forms."""
    table = wedge_table(2 * omega.n, 1, 2)
    values = omega(as_points(points, omega.dimension))
    b = torch.einsum("kij,pj->pki", table, values)
    sigma = torch.linalg.svdvals(b)
    return sigma[:, -1] / sigma[:, 0].clamp_min(torch.finfo(sigma.dtype).tiny)


def extract_lee_form(omega: KForm, points: PointsLike, tolerance: Optional[float] = None) -> LeeFormResult:
    """Solve d(omega) = theta ^ omega for theta and check the fit on the sample."""
    if omega.degree != 2:
        raise DegreeError(f"extract_lee_form expects a 2-form, got degree {omega.degree}")
    if omega.n < 2:
        raise DimensionError("The Lee form is only determined for complex dimension n >= 2")
    tolerance = settings.TOL_JET if tolerance is None else tolerance
    batch = as_points(points, omega.dimension)
    if omega.is_zero:
        raise RankError("omega is identically zero")
    ratios = wedge_operator_singular_ratio(omega, batch)
    worst = int(ratios.argmin())
    if float(ratios[worst]) < RANK_RATIO:
        raise RankError(
            f"Wedge with omega is not injective at {batch[worst].tolist()} (sigma ratio {float(ratios[worst]):.2e})"
        )

    theta = lee_form_of(omega)
    residual, worst_point = form_residual_with_point(exterior_d(omega), wedge(theta, omega), batch)
    if residual > tolerance:
        raise NotLCKError(
            f"d(omega) is not theta ^ omega for '{omega.label}'",
            residual=residual,
            worst_point=worst_point.tolist(),
        )
    logger.debug(f"Lee form of '{omega.label}' extracted, residual {residual:.3e}")
    return LeeFormResult(theta=theta, residual=residual, worst_point=worst_point, min_singular_ratio=float(ratios[worst]))


def validate_lck(
    omega: KForm,
    points: PointsLike,
    theta: Optional[KForm] = None,
    tolerance: Optional[float] = None,
    label: str = "",
) -> LCKStructure:
    """Check positivity, I-invariance, d(omega) = theta ^ omega and d(theta) = 0."""
    tolerance = settings.TOL_JET if tolerance is None else tolerance
    batch = as_points(points, omega.dimension)
    metric = HermitianMetric(omega)
    min_eigenvalue = metric.check_positive(batch)

    i_residual = form_residual(apply_I(omega) * float(CONVENTIONS.kahler_form_i_sign), omega, batch)
    if i_residual > tolerance:
        raise GeometryError(f"'{omega.label}' is not I-invariant (residual {i_residual:.3e})", eigenvalue=min_eigenvalue)

    if theta is None:
        theta = extract_lee_form(omega, batch, tolerance).theta
    defining, worst_point = form_residual_with_point(exterior_d(omega), wedge(theta, omega), batch)
    if defining > tolerance:
        raise NotLCKError("d(omega) is not theta ^ omega", residual=defining, worst_point=worst_point.tolist())
    closedness = sup_norm(exterior_d(theta)(batch))
    if closedness > tolerance:
        raise NotLCKError("Lee form is not closed", residual=closedness)

    residuals = LCKResiduals(defining, closedness, i_residual, min_eigenvalue, int(batch.shape[0]))
    logger.info(
        f"LCK structure '{label or omega.label}' validated on {batch.shape[0]} points: "
        f"defining {defining:.2e}, d(theta) {closedness:.2e}, min eig {min_eigenvalue:.3e}"
    )
    return LCKStructure(omega=omega, theta=theta, residuals=residuals, label=label or omega.label)


def exp_scalar(f: ScalarField, sign: float = 1.0) -> ScalarField:
    """e^{sign * f}."""
    ff = f.coefficients
    return ScalarField(
        n=f.n,
        degree=0,
        coefficients=lambda x: torch.exp(sign * ff(x)),
        smoothness=f.smoothness,
        label=f"exp({sign:+g}*{f.label})",
    )


def conformal_rescale(
    structure: LCKStructure,
    f: ScalarField,
    points: PointsLike,
    tolerance: Optional[float] = None,
) -> LCKStructure:
    """
    omega' = e^{-f} omega, with the Lee form recomputed by least squares.

    The recomputed theta' is compared against theta + s df where s is the
    recorded ``lee_rescale_sign``; a mismatch means the conventions record
    is wrong and raises NotLCKError.
    """
    tolerance = settings.TOL_JET if tolerance is None else tolerance
    batch = as_points(points, structure.omega.dimension)
    if f.is_zero:
        return structure
    omega = replace(multiply(exp_scalar(f, -1.0), structure.omega), label=f"e^-f*{structure.omega.label}")
    theta = extract_lee_form(omega, batch, tolerance).theta
    expected = structure.theta + exterior_d(f) * float(CONVENTIONS.lee_rescale_sign)
    mismatch = form_residual(theta, expected, batch)
    if mismatch > tolerance:
        raise NotLCKError(
            f"Lee form of the rescaled structure is not theta {CONVENTIONS.lee_rescale_sign:+d} df",
            residual=mismatch,
        )
    return validate_lck(omega, batch, theta=theta, tolerance=tolerance, label=f"rescaled({structure.label})")


def check_automorphy(
    a: KForm,
    deck: LinearMap,
    chi: float,
    points: PointsLike,
    vectors: Optional[torch.Tensor] = None,
) -> float:
    """sup |deck* a - chi a| over the sample (components, or evaluations on vectors)."""
    scaled = pullback(deck, a) - a * float(chi)
    batch = as_points(points, a.dimension)
    if vectors is None or a.degree == 0:
        return sup_norm(scaled(batch))
    return sup_norm(scaled.evaluate(batch, vectors))
