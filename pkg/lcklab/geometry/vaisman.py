"""Vaisman check (parallel Lee form) and the explicit Vaisman potential."""

import logging
from dataclasses import dataclass, field
from typing import Optional

import torch

from lcklab.config.settings import settings
from lcklab.core.exceptions import DegreeError, PreconditionError
from lcklab.forms.fields import KForm, PointsLike, ScalarField, as_points, min_smoothness
from lcklab.forms.sampling import sup_norm, worst_index
from lcklab.geometry.lck import LCKStructure
from lcklab.geometry.metric import HermitianMetric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VaismanReport:
    residual: float
    tolerance: float
    levi_civita_residual: float
    sample_count: int
    worst_point: Optional[torch.Tensor] = field(default=None, compare=False)

    @property
    def is_vaisman(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "nabla_theta": self.residual,
            "tolerance": self.tolerance,
            "levi_civita_residual": self.levi_civita_residual,
            "sample_count": self.sample_count,
            "is_vaisman": self.is_vaisman,
        }


def is_vaisman(structure: LCKStructure, points: PointsLike, tolerance: Optional[float] = None) -> VaismanReport:
    """sup |nabla theta| for the Levi-Civita connection of the LCK metric."""
    tolerance = settings.TOL_VAISMAN if tolerance is None else tolerance
    batch = as_points(points, structure.omega.dimension)
    metric = structure.metric
    metric.check_positive(batch)
    nabla = metric.covariant_derivative(structure.theta, batch)
    residual = sup_norm(nabla)
    report = VaismanReport(
        residual=residual,
        tolerance=tolerance,
        levi_civita_residual=metric.levi_civita_residual(batch),
        sample_count=int(batch.shape[0]),
        worst_point=batch[worst_index(nabla)],
    )
    logger.info(f"Vaisman check on '{structure.label}': |nabla theta| = {residual:.3e} (tol {tolerance:.1e})")
    return report


def vaisman_potential(
    structure: LCKStructure,
    kahler_form: KForm,
    points: PointsLike,
    lifted_theta: Optional[KForm] = None,
    tolerance: Optional[float] = None,
) -> ScalarField:
    """
    phi = g~(theta#, theta#) with theta# dual to theta under the LCK metric
    and g~ the metric of ``kahler_form``.

    On the classical Hopf model this is |z|^2 for the flat form, so
    dd^c phi = kahler_form.
    """
    if kahler_form.degree != 2:
        raise DegreeError(f"kahler_form must be a 2-form, got degree {kahler_form.degree}")
    theta = structure.theta if lifted_theta is None else lifted_theta
    batch = as_points(points, structure.omega.dimension)
    if theta.is_zero or sup_norm(theta(batch)) <= settings.TOL_EXACT:
        raise PreconditionError("Lee form vanishes: the Vaisman potential would be identically zero")
    report = is_vaisman(structure, batch, tolerance)
    if not report.is_vaisman:
        raise PreconditionError(f"Structure is not Vaisman (|nabla theta| = {report.residual:.3e})")

    sharp = structure.metric.sharp_fn(theta)
    g_kahler = HermitianMetric(kahler_form).matrix_fn()

    def potential(x: torch.Tensor) -> torch.Tensor:
        v = sharp(x)
        return (v @ g_kahler(x) @ v).reshape(1)

    return ScalarField(
        n=structure.n,
        degree=0,
        coefficients=potential,
        smoothness=min_smoothness(theta.smoothness, kahler_form.smoothness),
        label=f"vaisman[{structure.label}]",
    )
