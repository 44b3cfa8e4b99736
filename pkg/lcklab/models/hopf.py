"""
Linear Hopf manifolds C^n minus 0 / <A> and their standard geometry.

When the contraction is a similarity alpha * Id the model carries a flat
catalog: the Kähler form dd^c|z|^2 on the cover, the Hopf LCK structure
dd^c|z|^2 / |z|^2 with Lee form -d log|z|^2, the radial Euler field and the
uniform rotation. Other contractions only carry deck data and circle actions.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import logm

from lcklab.config.conventions import CONVENTIONS
from lcklab.config.settings import settings
from lcklab.core.exceptions import (
    BranchError,
    ContractionError,
    DimensionError,
    KillingError,
    PreconditionError,
    StructuralError,
)
from lcklab.flows.actions import pullback
from lcklab.flows.linear import CircleAction, LinearFlow, LinearMap
from lcklab.forms.combinatorics import complex_structure_matrix, index_lookup
from lcklab.forms.fields import KForm, PointsLike, ScalarField, VectorField
from lcklab.forms.operators import lie_derivative
from lcklab.forms.sampling import form_residual, sample_points, sup_norm
from lcklab.geometry.lck import LCKStructure, WeightCharacter

logger = logging.getLogger(__name__)

BRANCH_TOLERANCE = 1e-12


def flat_kahler_form(n: int) -> KForm:
    """dd^c|z|^2 in closed form: constant * sum_j dx_j ^ dy_j."""
    m = 2 * n
    values = np.zeros(m * (m - 1) // 2)
    lookup = index_lookup(m, 2)
    for j in range(n):
        values[lookup[(2 * j, 2 * j + 1)]] = CONVENTIONS.ddc_flat_constant
    return KForm.constant(n, 2, values, label="omega~")


def square_norm(n: int) -> ScalarField:
    return ScalarField.from_function(n, lambda x: x @ x, label="|z|^2")


def hopf_lck_structure(n: int) -> LCKStructure:
    """omega = omega~ / |z|^2 with theta = -d log|z|^2 (not yet validated)."""
    kahler = flat_kahler_form(n)
    fk = kahler.coefficients
    omega = KForm(n=n, degree=2, coefficients=lambda x: fk(x) / (x @ x), label="omega~/|z|^2")
    theta = KForm(n=n, degree=1, coefficients=lambda x: -2.0 * x / (x @ x), label="-dlog|z|^2")
    return LCKStructure(omega=omega, theta=theta, label="hopf")


def rotation_generator(n: int, rates: Optional[Sequence[float]] = None) -> LinearMap:
    """z_j -> i * rate_j * z_j; uniform rotation (the matrix J) by default."""
    rates = np.ones(n) if rates is None else np.asarray(rates, dtype=float)
    if rates.shape != (n,):
        raise StructuralError(f"Need {n} rotation rates, got {rates.shape}")
    return LinearMap.from_complex(np.diag(1j * rates), label="rot(" + ",".join(f"{r:g}" for r in rates) + ")")


@dataclass(frozen=True)
class HopfCatalog:
    kahler_form: KForm
    potential: ScalarField
    lck: LCKStructure
    euler_field: VectorField
    rotation_field: VectorField


@dataclass(frozen=True)
class HopfModel:
    contraction: LinearMap
    character: WeightCharacter
    catalog: Optional[HopfCatalog] = field(default=None, compare=False)
    label: str = ""

    @property
    def n(self) -> int:
        return self.contraction.n

    @property
    def deck(self) -> LinearMap:
        return self.contraction

    @property
    def chi(self) -> float:
        return self.character.values["A"]

    @property
    def has_flat_catalog(self) -> bool:
        return self.catalog is not None

    def require_catalog(self) -> HopfCatalog:
        if self.catalog is None:
            raise PreconditionError(f"Hopf model '{self.label}' has no flat Kähler catalog (contraction is not a similarity)")
        return self.catalog


def make_linear_hopf(n: int, contraction: Union[LinearMap, np.ndarray], label: str = "") -> HopfModel:
    """Hopf model of an arbitrary complex-linear contraction."""
    if n < 2:
        raise DimensionError(f"LCK Hopf models need complex dimension n >= 2, got {n}")
    if not isinstance(contraction, LinearMap):
        contraction = LinearMap(np.asarray(contraction, dtype=float), label="A")
    if contraction.n != n:
        raise StructuralError(f"Contraction acts on C^{contraction.n}, expected C^{n}")
    if not contraction.is_complex_linear:
        raise StructuralError("Hopf contraction must be complex linear")
    contraction.require_invertible()
    eigenvalues = contraction.eigenvalues()
    offending = [e for e in eigenvalues if abs(e) >= 1.0 or abs(e) == 0.0]
    if offending:
        raise ContractionError("Contraction needs every eigenvalue modulus in (0, 1)", eigenvalues=offending)

    character = WeightCharacter.of_deck(contraction)
    catalog = None
    if contraction.is_similarity():
        kahler = flat_kahler_form(n)
        catalog = HopfCatalog(
            kahler_form=kahler,
            potential=square_norm(n),
            lck=hopf_lck_structure(n),
            euler_field=VectorField.linear(np.eye(2 * n), label="E"),
            rotation_field=VectorField.linear(complex_structure_matrix(n), label="IE"),
        )
        probe = sample_points(n, 4, 0)
        residual = sup_norm(pullback(contraction, kahler)(probe) - kahler(probe) * character.values["A"])
        if residual > settings.TOL_EXACT * abs(CONVENTIONS.ddc_flat_constant):
            raise StructuralError(f"Deck character {character.values['A']} does not match the pullback scale (residual {residual:.3e})")

    model = HopfModel(contraction=contraction, character=character, catalog=catalog, label=label or contraction.label)
    logger.info(
        f"Hopf model '{model.label}' on C^{n}: chi = {model.chi:.6g}, "
        f"spectral radius {contraction.spectral_radius():.4g}, flat catalog {'yes' if catalog else 'no'}"
    )
    return model


def make_classical_hopf(n: int, alpha: complex) -> HopfModel:
    """C^n minus 0 / <alpha * Id>."""
    if n < 2:
        raise DimensionError(f"LCK Hopf models need complex dimension n >= 2, got {n}")
    alpha = complex(alpha)
    if not 0.0 < abs(alpha) < 1.0:
        raise ContractionError(f"alpha must satisfy 0 < |alpha| < 1, got {alpha}", eigenvalues=[alpha])
    return make_linear_hopf(n, LinearMap.scalar(n, alpha), label=f"classical(alpha={alpha:g})")


@dataclass(frozen=True)
class HomothetyField:
    """A linear holomorphic field with Lie_A omega~ = lambda omega~."""

    field: VectorField
    lam: float
    kahler_form: KForm
    killing_part: Optional[VectorField] = None

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def generator(self) -> LinearMap:
        return LinearMap(self.field.generator, label=self.field.label)

    @property
    def companion(self) -> VectorField:
        """A^c = I(A)."""
        return self.field.apply_I()

    @property
    def companion_flow(self) -> LinearFlow:
        companion = self.companion
        return LinearFlow(LinearMap(companion.generator, label=companion.label))

    def scaled(self, c: float) -> "HomothetyField":
        """c A, a homothety with constant c * lambda."""
        return HomothetyField(
            field=self.field.scaled(c),
            lam=c * self.lam,
            kahler_form=self.kahler_form,
            killing_part=None if self.killing_part is None else self.killing_part.scaled(c),
        )


def homothety_field(
    model: HopfModel,
    lam: float,
    killing_part: Optional[VectorField] = None,
    points: Optional[PointsLike] = None,
    tolerance: Optional[float] = None,
) -> HomothetyField:
    """A = (lambda / 2) E + K for the Euler field E and a Killing part K."""
    catalog = model.require_catalog()
    if not lam > 0:
        raise PreconditionError(f"Homothety constant must be positive, got {lam}")
    tolerance = settings.TOL_EXACT if tolerance is None else tolerance
    points = sample_points(model.n, 16, settings.DEFAULT_SEED) if points is None else points
    kahler = catalog.kahler_form

    euler = catalog.euler_field.scaled(lam / 2.0)
    if killing_part is None:
        field_ = VectorField.linear(euler.generator, label=f"A[{lam:g}]")
    else:
        if not killing_part.is_linear:
            raise StructuralError("Only linear Killing parts are supported")
        j = complex_structure_matrix(model.n)
        commutator = float(np.abs(killing_part.generator @ j - j @ killing_part.generator).max())
        if commutator > tolerance:
            raise KillingError("Killing part is not holomorphic", residual=commutator)
        residual = sup_norm(lie_derivative(killing_part, kahler)(points))
        if residual > tolerance:
            raise KillingError(f"Lie_K omega~ does not vanish for '{killing_part.label}'", residual=residual)
        field_ = VectorField.linear(euler.generator + killing_part.generator, label=f"A[{lam:g}]+{killing_part.label}")

    homothety = HomothetyField(field=field_, lam=float(lam), kahler_form=kahler, killing_part=killing_part)
    residual = form_residual(lie_derivative(field_, kahler), kahler * float(lam), points)
    if residual > tolerance * max(1.0, lam):
        raise KillingError(f"Lie_A omega~ != {lam:g} omega~", residual=residual)
    return homothety


def killing_rotation(n: int, rates: Sequence[float]) -> VectorField:
    generator = rotation_generator(n, rates)
    return VectorField.linear(generator.matrix, label=generator.label)


def deck_circle_action(model: HopfModel) -> CircleAction:
    """
    Flow of log A with period 1, so the time-1 map is the deck map.

    Accepted when A is a similarity or has positive real eigenvalues.
    """
    complex_matrix = model.contraction.complex_matrix()
    eigenvalues = np.linalg.eigvals(complex_matrix)
    positive_real = bool(np.all(np.abs(eigenvalues.imag) <= BRANCH_TOLERANCE) and np.all(eigenvalues.real > 0))
    if not (model.contraction.is_similarity() or positive_real):
        raise BranchError(
            "Deck map has complex eigenvalues; no real logarithm on the principal branch "
            f"({', '.join(f'{complex(e):.4g}' for e in eigenvalues)})"
        )
    if model.contraction.is_similarity():
        log_matrix = np.eye(model.n) * np.log(complex(complex_matrix[0, 0]))
    else:
        log_matrix = logm(complex_matrix)
    generator = LinearMap.from_complex(log_matrix, label="log A")
    return CircleAction(LinearFlow(generator), 1.0, deck=model.contraction, label="deck")


def rotation_circle_action(model: HopfModel, rates: Optional[Sequence[float]] = None) -> CircleAction:
    """Holomorphic rotation z_j -> e^{i rate_j t} z_j with period 2 pi."""
    generator = rotation_generator(model.n, rates)
    return CircleAction(LinearFlow(generator), 2.0 * np.pi, label="rotation")

