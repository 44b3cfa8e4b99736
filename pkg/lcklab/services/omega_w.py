"""
Averaged Kähler forms along the companion flow and their potentials.

omega_W integrates the pullbacks exp(t A^c)* omega over [0, 2 pi / lambda].
The psi construction integrates exp(s A^c / lambda)* omega against the
weight psi(s) = cos(s - c) + 1 on [c - pi, c + pi]; the square length of A
for that form is an explicit potential. With the window centered at pi,
dd^c(lambda^{-3} |A|^2_psi) = omega_W, which ``certify_potential`` checks.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from lcklab.config.conventions import CONVENTIONS
from lcklab.config.settings import settings
from lcklab.core.decorators import log_execution
from lcklab.core.exceptions import PeriodicityError
from lcklab.flows.actions import flow_pullback_form, weighted_flow_integral
from lcklab.flows.linear import LinearMap
from lcklab.flows.quadrature import QuadratureRule, QuadratureScheme
from lcklab.forms.combinatorics import index_lookup
from lcklab.forms.fields import KForm, PointsLike, ScalarField, as_points
from lcklab.forms.operators import ddc, lie_derivative, lie_derivative_power
from lcklab.forms.sampling import SampleManifest, form_residual, sup_norm
from lcklab.geometry.lck import check_automorphy
from lcklab.geometry.metric import HermitianMetric, square_length
from lcklab.models.hopf import HomothetyField

logger = logging.getLogger(__name__)

PERIODICITY_PROBES = 8


def circle_interval(A: HomothetyField) -> Tuple[float, float]:
    return 0.0, 2.0 * np.pi / A.lam


def periodicity_residual(A: HomothetyField, omega: KForm, q: QuadratureRule, points: PointsLike) -> float:
    """
    How far the endpoint pullback is from dd^c-exactly closing up.

    exp(T A^c)* omega - omega equals dd^c of the square length of A taken
    against mu = -(1/lambda) int_0^T sin(lambda s) exp(s A^c)* omega ds
    whenever the key formula holds along the flow.
    """
    flow = A.companion_flow
    interval = circle_interval(A)
    gap = flow_pullback_form(flow, interval[1], omega) - omega
    mu = weighted_flow_integral(
        flow,
        omega,
        interval,
        q.with_scheme(QuadratureScheme.GAUSS_LEGENDRE),
        weight=lambda s: -np.sin(A.lam * s) / A.lam,
    )
    witness = ddc(square_length(mu, A.field))
    return form_residual(gap, witness, points)


@log_execution(log_args=False)
def build_omega_W_circle(
    A: HomothetyField,
    omega: KForm,
    q: QuadratureRule,
    points: Optional[PointsLike] = None,
    tolerance: Optional[float] = None,
) -> KForm:
    """
    Unnormalized int_0^{2 pi / lambda} exp(t A^c)* omega dt.

    The integrand need not close up pointwise, so Gauss-Legendre nodes are
    used whatever the scheme of ``q``. ``points`` switches on the
    periodicity check.
    """
    if points is not None:
        tolerance = settings.TOL_QUAD if tolerance is None else tolerance
        probes = as_points(points, omega.dimension)[:PERIODICITY_PROBES]
        residual = periodicity_residual(A, omega, q, probes)
        if residual > tolerance:
            raise PeriodicityError(
                f"Companion flow of '{A.field.label}' does not close up over [0, 2pi/lambda]",
                residual=residual,
            )
    rule = q.with_scheme(QuadratureScheme.GAUSS_LEGENDRE)
    omega_w = weighted_flow_integral(A.companion_flow, omega, circle_interval(A), rule)
    return KForm(n=omega.n, degree=2, coefficients=omega_w.coefficients, smoothness=omega_w.smoothness, label="omega_W")


@dataclass(frozen=True)
class PsiWindow:
    """psi(s) = cos(s - center) + 1 on [center - pi, center + pi], zero outside."""

    center: float = 0.0

    @property
    def support(self) -> Tuple[float, float]:
        return self.center - np.pi, self.center + np.pi

    def _inside(self, s: np.ndarray) -> np.ndarray:
        lo, hi = self.support
        return (s >= lo) & (s <= hi)

    def value(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.where(self._inside(s), np.cos(s - self.center) + 1.0, 0.0)

    def derivative(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.where(self._inside(s), -np.sin(s - self.center), 0.0)

    def second_derivative(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.where(self._inside(s), -np.cos(s - self.center), 0.0)

    def mass(self, q: QuadratureRule) -> float:
        return q.integrate(self.value, *self.support)


@dataclass(frozen=True)
class PsiPotential:
    form: KForm
    potential: ScalarField
    derivative_form: KForm
    second_derivative_form: KForm
    window: PsiWindow


def psi_flow_form(A: HomothetyField, omega: KForm, q: QuadratureRule, weight, window: PsiWindow) -> KForm:
    """int weight(s) exp(s A^c / lambda)* omega ds over the window."""
    flow = A.companion_flow.scaled(1.0 / A.lam)
    return weighted_flow_integral(flow, omega, window.support, q, weight=weight)


@log_execution(log_args=False)
def build_psi_potential(
    A: HomothetyField,
    omega: KForm,
    q: QuadratureRule,
    center: float = 0.0,
    points: Optional[PointsLike] = None,
    tolerance: Optional[float] = None,
) -> PsiPotential:
    """
    omega_psi and the square length |A|^2_psi it assigns to A.

    The window is treated as the whole support: psi and psi' vanish at
    both ends, so the rule of ``q`` is applied to it as a closed interval.
    Passing ``points`` runs the same periodicity check as omega_W.
    """
    if points is not None:
        tolerance = settings.TOL_QUAD if tolerance is None else tolerance
        probes = as_points(points, omega.dimension)[:PERIODICITY_PROBES]
        residual = periodicity_residual(A, omega, q, probes)
        if residual > tolerance:
            raise PeriodicityError("Companion flow does not close up for the psi construction", residual=residual)
    window = PsiWindow(center)
    form = psi_flow_form(A, omega, q, window.value, window)
    potential = square_length(form, A.field)
    return PsiPotential(
        form=form,
        potential=potential,
        derivative_form=psi_flow_form(A, omega, q, window.derivative, window),
        second_derivative_form=psi_flow_form(A, omega, q, window.second_derivative, window),
        window=window,
    )


@dataclass(frozen=True)
class PotentialCertificate:
    """Constructive witness that omega_W = dd^c phi with phi automorphic."""

    omega_W: KForm
    potential: ScalarField
    residual_exactness: float
    min_positivity_eigenvalue: float
    automorphy_residual: float
    periodicity_residual: float
    quadrature: QuadratureRule
    manifest: Optional[SampleManifest] = None
    tol_exactness: float = field(default_factory=lambda: settings.TOL_QUAD)
    tol_automorphy: float = field(default_factory=lambda: settings.TOL_JET)
    positivity_threshold: float = field(default_factory=lambda: settings.POSITIVITY_THRESHOLD)

    def failing_legs(self) -> List[str]:
        legs = []
        if not self.residual_exactness <= self.tol_exactness:
            legs.append("exactness")
        if not self.min_positivity_eigenvalue > self.positivity_threshold:
            legs.append("positivity")
        if not self.automorphy_residual <= self.tol_automorphy:
            legs.append("automorphy")
        if not self.periodicity_residual <= self.tol_exactness:
            legs.append("periodicity")
        return legs

    @property
    def is_valid(self) -> bool:
        return not self.failing_legs()

    def to_dict(self) -> dict:
        return {
            "valid": self.is_valid,
            "failing_legs": self.failing_legs(),
            "residual_exactness": self.residual_exactness,
            "min_positivity_eigenvalue": self.min_positivity_eigenvalue,
            "automorphy_residual": self.automorphy_residual,
            "periodicity_residual": self.periodicity_residual,
            "quadrature": self.quadrature.to_dict(),
            "samples": self.manifest.to_dict() if self.manifest else None,
        }


def certified_potential(A: HomothetyField, omega: KForm, q: QuadratureRule) -> ScalarField:
    """lambda^{-3} |A|^2_psi with the window on [0, 2 pi]."""
    psi = build_psi_potential(A, omega, q, center=np.pi)
    return psi.potential * float(A.lam**CONVENTIONS.psi_potential_power)


@log_execution(log_args=False)
def certify_potential(
    A: HomothetyField,
    omega: KForm,
    q: QuadratureRule,
    points: PointsLike,
    deck: LinearMap,
    chi: float,
    manifest: Optional[SampleManifest] = None,
    tol_exactness: Optional[float] = None,
    tol_automorphy: Optional[float] = None,
) -> PotentialCertificate:
    """
    Build omega_W and phi, then record every leg as data.

    A failing leg never raises; the certificate is simply invalid.
    """
    batch = as_points(points, omega.dimension)
    tol_exactness = settings.TOL_QUAD if tol_exactness is None else tol_exactness
    tol_automorphy = settings.TOL_JET if tol_automorphy is None else tol_automorphy

    periodicity = periodicity_residual(A, omega, q, batch[:PERIODICITY_PROBES])
    omega_w = build_omega_W_circle(A, omega, q)
    phi = certified_potential(A, omega, q)

    exactness = form_residual(ddc(phi), omega_w, batch)
    eigenvalues = HermitianMetric(omega_w).min_eigenvalues(batch)
    automorphy = max(
        check_automorphy(omega_w, deck, chi, batch),
        check_automorphy(phi, deck, chi, batch),
    )

    certificate = PotentialCertificate(
        omega_W=omega_w,
        potential=phi,
        residual_exactness=exactness,
        min_positivity_eigenvalue=float(eigenvalues.min()),
        automorphy_residual=automorphy,
        periodicity_residual=periodicity,
        quadrature=q,
        manifest=manifest,
        tol_exactness=tol_exactness,
        tol_automorphy=tol_automorphy,
    )
    if certificate.is_valid:
        logger.info(f"Potential certified at N={q.n}: exactness {exactness:.3e}, automorphy {automorphy:.3e}")
    else:
        logger.warning(f"Potential certificate invalid at N={q.n}: failing {certificate.failing_legs()}")
    return certificate


def flow_derivative_residual(
    A: HomothetyField,
    omega: KForm,
    psi: PsiPotential,
    q: QuadratureRule,
    points: PointsLike,
    step: float = 1e-4,
) -> float:
    """
    Lie_{A^c / lambda} omega_psi against sign * omega_{psi'}, with the left
    side taken as a centered difference in the convolution parameter.
    """
    batch = as_points(points, omega.dimension)
    shifted = []
    for h in (step, -step):
        window = PsiWindow(psi.window.center + h)
        shifted.append(psi_flow_form(A, omega, q, window.value, window)(batch))
    # omega_psi with center c + h is exp(h A^c / lambda)* of the one at c
    derivative = (shifted[0] - shifted[1]) / (2.0 * step)
    expected = psi.derivative_form(batch) * float(CONVENTIONS.psi_derivative_sign)
    return sup_norm(derivative - expected)


def convolution_identities(A: HomothetyField, psi: PsiPotential, points: PointsLike) -> Dict[str, float]:
    """
    Residuals of Lie_{A^c / lambda} omega_psi = sign * omega_{psi'} and
    Lie^2_{A^c / lambda} omega_psi = omega_{psi''}.

    Both hold for the exact convolution; on a quadrature they are limited by
    the rule, not by the jets.
    """
    batch = as_points(points, psi.form.dimension)
    unit = A.companion.scaled(1.0 / A.lam)
    sign = float(CONVENTIONS.psi_derivative_sign)
    return {
        "first_derivative": form_residual(lie_derivative(unit, psi.form), psi.derivative_form * sign, batch),
        "second_derivative": form_residual(
            lie_derivative_power(unit, psi.form, 2), psi.second_derivative_form * (sign * sign), batch
        ),
    }


def omega_w_closed_form(n: int, lam: float, rates: Optional[Sequence[float]] = None) -> KForm:
    """
    omega_W for A = (lambda / 2) E + diag(i r_j) on the flat form.

    A^c scales z_j by e^{-r_j t}, so the j-th block of omega~ picks up
    int_0^{2 pi / lambda} e^{-2 r_j t} dt.
    """
    rates = np.zeros(n) if rates is None else np.asarray(rates, dtype=float)
    period = 2.0 * np.pi / lam
    m = 2 * n
    values = np.zeros(m * (m - 1) // 2)
    lookup = index_lookup(m, 2)
    for j, r in enumerate(rates):
        weight = period if abs(r) < 1e-14 else -np.expm1(-2.0 * r * period) / (2.0 * r)
        values[lookup[(2 * j, 2 * j + 1)]] = CONVENTIONS.ddc_flat_constant * weight
    return KForm.constant(n, 2, values, label="omega_W (closed form)")
