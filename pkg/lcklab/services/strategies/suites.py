"""
Strategy implementations of the verification suites.

Each suite checks one identity (or one family of identities) on the run
context and hands back a SuiteOutcome. Gated residuals decide the verdict;
quadrature-limited side quantities are only reported, except in the
certify suite where they are the point of the check.
"""

import logging
from typing import Dict

import numpy as np

from lcklab.config.conventions import CONVENTIONS
from lcklab.config.settings import settings
from lcklab.core.base import SuiteOutcome, VerificationSuite
from lcklab.core.decorators import suite_method
from lcklab.core.exceptions import BranchError
from lcklab.flows.actions import base_points, closedness_residual, loop_integral
from lcklab.flows.quadrature import QuadratureRule
from lcklab.forms.operators import ddc, multiply
from lcklab.forms.sampling import form_residual, sup_norm
from lcklab.geometry.lck import check_automorphy, exp_scalar, extract_lee_form, validate_lck
from lcklab.geometry.metric import HermitianMetric
from lcklab.geometry.vaisman import is_vaisman, vaisman_potential
from lcklab.models.hopf import deck_circle_action, homothety_field, rotation_circle_action
from lcklab.services.averaging import averaging_pipeline, perturbation_profile
from lcklab.services.context import RunContext
from lcklab.services.key_formula import (
    key_formula_sides,
    proportionality_spread,
    verify_key_formula,
    verify_proof_chain,
)
from lcklab.services.omega_w import (
    PsiWindow,
    build_omega_W_circle,
    build_psi_potential,
    certify_potential,
    convolution_identities,
    omega_w_closed_form,
)
from lcklab.utils.suite_logger import SuiteLogger

logger = logging.getLogger(__name__)

HOMOGENEITY_SCALES = (0.5, 2.0)
PERTURBATION_EPSILON = 0.1


class ValidateLCKSuite(VerificationSuite):
    """Definitional checks of the catalog LCK structure, Lee form extracted from omega."""

    name = "validate-lck"
    identity = "LCK definition: d(omega) = theta ^ omega with d(theta) = 0"
    description = "positivity, I-invariance, defining equation and closedness of the Hopf LCK structure"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        catalog = context.model.require_catalog()
        structure = validate_lck(catalog.lck.omega, context.points, tolerance=context.tol_jet, label="hopf")
        residuals = structure.residuals
        lee_error = form_residual(structure.theta, catalog.lck.theta, context.points)
        residual = max(residuals.defining, residuals.closedness, residuals.i_invariance, lee_error)
        return SuiteOutcome(
            residual_max=residual,
            passed=residual <= context.tol_jet,
            values={**residuals.to_dict(), "lee_form_error": lee_error},
        )


class LeeFormSuite(VerificationSuite):
    """Lee form extraction against theta = -d log|z|^2, plus the flat Kähler control."""

    name = "lee-form"
    identity = "Lee form: theta = -d log|z|^2 on the Hopf cover"
    description = "least-squares Lee form, its closedness and the wedge-injectivity margin"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        catalog = context.model.require_catalog()
        result = extract_lee_form(catalog.lck.omega, context.points, context.tol_jet)
        error = form_residual(result.theta, catalog.lck.theta, context.points)
        closedness = closedness_residual(result.theta, context.points)
        flat_theta = sup_norm(extract_lee_form(catalog.kahler_form, context.points, context.tol_jet).theta(context.points))
        residual = max(error, closedness, flat_theta, result.residual)
        return SuiteOutcome(
            residual_max=residual,
            passed=residual <= context.tol_jet,
            values={
                "theta_error": error,
                "d_theta": closedness,
                "flat_theta": flat_theta,
                "defining": result.residual,
                "min_singular_ratio": result.min_singular_ratio,
            },
        )


class MonodromySuite(VerificationSuite):
    """Loop integrals of the Lee form along the deck and rotation circle actions."""

    name = "monodromy"
    identity = "monodromy: integral of theta over circle orbits (nontrivial weight bundle)"
    description = "deck-direction monodromy equals -log chi; rotation monodromy vanishes"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        structure = context.hopf_structure()
        q = context.quadrature
        rotation = rotation_circle_action(context.model)
        bases = base_points(context.model.n)
        values: Dict[str, float] = {
            "rotation": loop_integral(structure.theta, rotation, bases[0], q, context.tol_jet),
        }
        residual = abs(values["rotation"])
        try:
            deck = deck_circle_action(context.model)
        except BranchError as exc:
            SuiteLogger.log_diagnostic(self.name, f"deck action unavailable: {exc.message}")
        else:
            expected = -float(np.log(context.model.chi))
            deck_values = [loop_integral(structure.theta, deck, base, q, context.tol_jet) for base in bases]
            values.update(deck=deck_values[0], deck_other_base=deck_values[1], expected_deck=expected)
            residual = max(residual, *(abs(v - expected) for v in deck_values))
        return SuiteOutcome(residual_max=residual, passed=residual <= context.tol_jet, values=values)


class KeyFormulaSuite(VerificationSuite):
    """dd^c|A|^2 = lambda^2 omega + Lie^2_{A^c} omega, and its homogeneity under A -> cA."""

    name = "key-formula"
    identity = "key formula: dd^c|A|^2 = lambda^2 omega + Lie_{A^c}^2 omega"
    description = "both sides of the key formula on components and random vector pairs"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        A = context.require_homothety()
        kahler = context.model.require_catalog().kahler_form
        report = verify_key_formula(A, kahler, context.points, seed=context.seed, tolerance=context.tol_jet)
        values = dict(report.to_dict())
        residual = max(report.residual, report.pair_residual)
        for c in HOMOGENEITY_SCALES:
            scaled = verify_key_formula(A.scaled(c), kahler, context.points, seed=context.seed, tolerance=context.tol_jet)
            values[f"scaled_{c:g}"] = max(scaled.residual, scaled.pair_residual)
            residual = max(residual, values[f"scaled_{c:g}"])
        lie_squared = key_formula_sides(A, kahler)["lie_squared"]
        values["lie_squared_spread"] = proportionality_spread(lie_squared, kahler, context.points)
        return SuiteOutcome(residual_max=residual, passed=residual <= context.tol_jet, values=values)


class ProofChainSuite(VerificationSuite):
    """Each displayed identity of the key formula's proof as its own residual line."""

    name = "proof-chain"
    identity = "key formula proof: eta = i_A omega, eta^c = I eta and their identities"
    description = "eta(A) = 0, Lie_A omega = d eta = omega, Lie_A eta = eta, d^c eta^c = omega, Lie_{A^c} omega = d eta^c"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        A = context.require_homothety()
        kahler = context.model.require_catalog().kahler_form
        report = verify_proof_chain(A, kahler, context.points, context.tol_jet)
        failing = ", ".join(line.name for line in report.failing())
        return SuiteOutcome(
            residual_max=report.residual,
            passed=report.passed,
            values={line.name: line.residual for line in report.lines},
            detail=f"failing lines: {failing}" if failing else "",
        )


class AveragingPipelineSuite(VerificationSuite):
    """Averaging a non-invariant conformal perturbation of the Hopf structure over the rotation action."""

    name = "averaging-pipeline"
    identity = "averaging: an S^1-invariant LCK metric conformal to the initial one"
    description = "theta averaged, omega rescaled and averaged; invariance and unchanged monodromy"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        catalog = context.model.require_catalog()
        points = context.pipeline_points
        profile = perturbation_profile(context.model.n) * PERTURBATION_EPSILON
        omega = multiply(exp_scalar(profile), catalog.lck.omega)
        perturbed = validate_lck(omega, points, tolerance=context.tol_jet, label="hopf*e^{eps h}")

        try:
            deck = deck_circle_action(context.model)
        except BranchError:
            deck = None
        q = QuadratureRule(settings.PIPELINE_QUADRATURE_N)
        result = averaging_pipeline(
            perturbed,
            rotation_circle_action(context.model),
            q,
            points,
            deck_action=deck,
            tolerance=context.tol_quad,
        )
        passed = (
            result.invariance_residual <= context.tol_quad
            and result.exactness_residual <= context.tol_quad
            and result.monodromy_drift <= context.tol_jet
        )
        return SuiteOutcome(
            residual_max=max(result.invariance_residual, result.exactness_residual, result.monodromy_drift),
            passed=passed,
            values=result.to_dict(),
        )


class OmegaWSuite(VerificationSuite):
    """omega_W as the integral of exp(t A^c)* omega over [0, 2 pi / lambda]."""

    name = "omega-W"
    identity = "omega_W = int_0^{2 pi / lambda} exp(t A^c)* omega dt"
    description = "positivity and automorphy of omega_W, closed form in the Killing case"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        A = context.require_homothety()
        model = context.model
        kahler = model.require_catalog().kahler_form
        q = context.quadrature
        omega_w = build_omega_W_circle(A, kahler, q)
        min_eigenvalue = float(HermitianMetric(omega_w).min_eigenvalues(context.points).min())
        automorphy = check_automorphy(omega_w, model.deck, model.chi, context.points)

        killing_case = homothety_field(model, A.lam)
        killing_error = form_residual(
            build_omega_W_circle(killing_case, kahler, q),
            kahler * (2.0 * np.pi / A.lam),
            context.points,
        )
        closed_form_error = form_residual(
            omega_w, omega_w_closed_form(model.n, A.lam, context.killing_rates), context.points
        )
        residual = max(automorphy, killing_error)
        return SuiteOutcome(
            residual_max=residual,
            passed=residual <= context.tol_jet and min_eigenvalue > settings.POSITIVITY_THRESHOLD,
            values={
                "min_eigenvalue": min_eigenvalue,
                "automorphy": automorphy,
                "killing_case_error": killing_error,
                "closed_form_error": closed_form_error,
                "spread_vs_omega": proportionality_spread(omega_w, kahler, context.points),
                "quadrature": q.to_dict(),
            },
        )


class PsiPotentialSuite(VerificationSuite):
    """The psi-convolved form omega_psi, its potential |A|^2_psi and the weight identities."""

    name = "psi-potential"
    identity = "psi convolution: omega_psi with psi = cos t + 1 on [-pi, pi] and potential |A|^2_psi"
    description = "key formula for omega_psi, mass of psi, psi + psi'' = 1; derivative identities reported"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        A = context.require_homothety()
        kahler = context.model.require_catalog().kahler_form
        q = context.quadrature
        psi = build_psi_potential(A, kahler, q)
        report = verify_key_formula(A, psi.form, context.points, seed=context.seed, tolerance=context.tol_jet)

        window = PsiWindow()
        mass_error = abs(window.mass(q) - 2.0 * np.pi)
        s = np.linspace(-np.pi, np.pi, 65)[1:-1]
        weight_identity = float(np.abs(window.value(s) + window.second_derivative(s) - 1.0).max())
        identities = convolution_identities(A, psi, context.points)

        residual = max(report.residual, report.pair_residual, mass_error, weight_identity)
        return SuiteOutcome(
            residual_max=residual,
            passed=residual <= context.tol_jet,
            values={
                "key_formula_psi": max(report.residual, report.pair_residual),
                "mass_error": mass_error,
                "psi_plus_psi2": weight_identity,
                **{f"lie_{name}": value for name, value in identities.items()},
            },
        )


class CertifySuite(VerificationSuite):
    """Certificate that omega_W = dd^c phi for an automorphic phi."""

    name = "certify"
    identity = "automorphic potential: dd^c(lambda^{-3} |A|^2_psi) = omega_W"
    description = "exactness, positivity, automorphy and periodicity legs of the potential certificate"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        A = context.require_homothety()
        model = context.model
        certificate = certify_potential(
            A,
            model.require_catalog().kahler_form,
            context.quadrature,
            context.points,
            model.deck,
            model.chi,
            manifest=context.manifest,
            tol_exactness=context.tol_quad,
            tol_automorphy=context.tol_jet,
        )
        legs = certificate.failing_legs()
        return SuiteOutcome(
            residual_max=max(certificate.residual_exactness, certificate.automorphy_residual),
            passed=certificate.is_valid,
            values=certificate.to_dict(),
            detail=f"failing legs: {', '.join(legs)}" if legs else "",
        )


class VaismanSuite(VerificationSuite):
    """Parallel Lee form of the Hopf structure and its explicit Vaisman potential."""

    name = "vaisman"
    identity = "Vaisman: nabla theta = 0 and potential omega~(theta#, theta#)"
    description = "Levi-Civita derivative of theta and dd^c of the Vaisman potential"

    @suite_method()
    def execute(self, context: RunContext) -> SuiteOutcome:
        catalog = context.model.require_catalog()
        structure = context.hopf_structure()
        report = is_vaisman(structure, context.points)
        phi = vaisman_potential(structure, catalog.kahler_form, context.points)
        potential_error = form_residual(
            ddc(phi), catalog.kahler_form * CONVENTIONS.vaisman_potential_constant, context.points
        )
        passed = report.is_vaisman and potential_error <= context.tol_jet
        return SuiteOutcome(
            residual_max=max(report.residual, potential_error),
            passed=passed,
            values={**report.to_dict(), "potential_error": potential_error},
        )


SUITE_CLASSES = (
    ValidateLCKSuite,
    LeeFormSuite,
    MonodromySuite,
    KeyFormulaSuite,
    ProofChainSuite,
    AveragingPipelineSuite,
    OmegaWSuite,
    PsiPotentialSuite,
    CertifySuite,
    VaismanSuite,
)
