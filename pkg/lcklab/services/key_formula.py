"""
The key formula dd^c|A|^2 = lambda^2 omega + Lie_{A^c}^2 omega for a
holomorphic homothety A of a Kähler form omega, and the chain of
identities that proves it.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import torch

from lcklab.config.settings import settings
from lcklab.core.decorators import log_execution
from lcklab.forms.fields import KForm, PointsLike, as_points
from lcklab.forms.operators import (
    apply_I,
    d_c,
    ddc,
    exterior_d,
    interior_product,
    lie_derivative,
    lie_derivative_power,
)
from lcklab.forms.sampling import paired_evaluations, sample_vectors, sup_norm
from lcklab.geometry.metric import square_length
from lcklab.models.hopf import HomothetyField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KeyFormulaReport:
    residual: float
    pair_residual: float
    tolerance: float
    lam: float
    lhs_norm: float
    lie_squared_norm: float
    sample_count: int
    pair_count: int

    @property
    def passed(self) -> bool:
        return max(self.residual, self.pair_residual) <= self.tolerance

    def to_dict(self) -> Dict[str, float]:
        return {
            "residual": self.residual,
            "pair_residual": self.pair_residual,
            "tolerance": self.tolerance,
            "lambda": self.lam,
            "lhs_norm": self.lhs_norm,
            "lie_squared_norm": self.lie_squared_norm,
            "sample_count": self.sample_count,
            "pair_count": self.pair_count,
        }


def key_formula_sides(A: HomothetyField, omega: KForm) -> Dict[str, KForm]:
    """Both sides of the key formula as lazily evaluated 2-forms."""
    lhs = ddc(square_length(omega, A.field))
    lie_squared = lie_derivative_power(A.companion, omega, 2)
    return {"lhs": lhs, "lie_squared": lie_squared, "rhs": omega * (A.lam**2) + lie_squared}


@log_execution(log_args=False)
def verify_key_formula(
    A: HomothetyField,
    omega: KForm,
    points: PointsLike,
    pairs_per_point: int = 20,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> KeyFormulaReport:
    """Sup-norm of dd^c|A|^2 - lambda^2 omega - Lie_{A^c}^2 omega on components and vector pairs."""
    tolerance = settings.TOL_JET if tolerance is None else tolerance
    seed = settings.DEFAULT_SEED if seed is None else seed
    batch = as_points(points, omega.dimension)
    sides = key_formula_sides(A, omega)
    lhs = sides["lhs"](batch)
    lie_squared = sides["lie_squared"](batch)
    rhs = omega(batch) * (A.lam**2) + lie_squared

    vectors = sample_vectors(batch.shape[0] * pairs_per_point, 2, omega.dimension, seed)
    vectors = vectors.reshape(batch.shape[0], pairs_per_point, 2, omega.dimension)
    pair_residual = sup_norm(paired_evaluations(lhs - rhs, vectors))

    report = KeyFormulaReport(
        residual=sup_norm(lhs - rhs),
        pair_residual=pair_residual,
        tolerance=tolerance,
        lam=A.lam,
        lhs_norm=sup_norm(lhs),
        lie_squared_norm=sup_norm(lie_squared),
        sample_count=int(batch.shape[0]),
        pair_count=pairs_per_point,
    )
    logger.info(
        f"Key formula for '{A.field.label}': residual {report.residual:.3e}, "
        f"pairs {report.pair_residual:.3e}, |Lie^2| {report.lie_squared_norm:.3e}"
    )
    return report


@dataclass(frozen=True)
class ProofLine:
    name: str
    identity: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {"name": self.name, "identity": self.identity, "residual": self.residual, "passed": self.passed}


@dataclass(frozen=True)
class ProofChainReport:
    lines: List[ProofLine] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(line.passed for line in self.lines)

    @property
    def residual(self) -> float:
        return max((line.residual for line in self.lines), default=0.0)

    def failing(self) -> List[ProofLine]:
        return [line for line in self.lines if not line.passed]

    def to_dict(self) -> dict:
        return {"lines": [line.to_dict() for line in self.lines], "passed": self.passed}


@log_execution(log_args=False)
def verify_proof_chain(
    A: HomothetyField,
    omega: KForm,
    points: PointsLike,
    tolerance: Optional[float] = None,
) -> ProofChainReport:
    """
    One residual line per identity of the proof, with A rescaled so lambda = 1.

    eta = i_A omega and eta^c = I eta = i_{A^c} omega.
    """
    tolerance = settings.TOL_JET if tolerance is None else tolerance
    batch = as_points(points, omega.dimension)
    unit = A.scaled(1.0 / A.lam)
    field_, companion = unit.field, unit.companion

    eta = interior_product(field_, omega)
    eta_c = apply_I(eta)
    d_eta = exterior_d(eta)
    lie_omega = lie_derivative(field_, omega)

    def residual(a: KForm, b: KForm) -> float:
        return sup_norm(a(batch) - b(batch))

    lines = [
        ProofLine("eta_of_A", "eta(A) = 0", sup_norm(interior_product(field_, eta)(batch)), tolerance),
        ProofLine("lie_A_omega", "Lie_A omega = d(i_A omega) = d eta", residual(lie_omega, d_eta), tolerance),
        ProofLine("d_eta", "d eta = omega", residual(d_eta, omega), tolerance),
        ProofLine("lie_A_eta", "Lie_A eta = eta", residual(lie_derivative(field_, eta), eta), tolerance),
        ProofLine("lie_A_eta_c", "Lie_A eta^c = eta^c", residual(lie_derivative(field_, eta_c), eta_c), tolerance),
        ProofLine("d_c_eta_c", "d^c eta^c = omega", residual(d_c(eta_c), omega), tolerance),
        ProofLine(
            "lie_Ac_omega",
            "Lie_{A^c} omega = d eta^c",
            residual(lie_derivative(companion, omega), exterior_d(eta_c)),
            tolerance,
        ),
    ]
    report = ProofChainReport(lines)
    for line in report.failing():
        logger.warning(f"Proof line '{line.name}' ({line.identity}) failed: residual {line.residual:.3e}")
    return report


def proportionality_spread(a: KForm, b: KForm, points: PointsLike) -> float:
    """
    Spread of the least-squares ratio a = c b across points and components.

    Zero when a is a single constant multiple of b.
    """
    batch = as_points(points, a.dimension)
    va, vb = a(batch), b(batch)
    c = float((va * vb).sum() / (vb * vb).sum())
    return sup_norm(va - c * vb) / max(sup_norm(va), torch.finfo(va.dtype).tiny)
