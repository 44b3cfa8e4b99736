"""
Tests for LCK validation, Lee form extraction, conformal rescaling,
automorphy and the Vaisman condition.
"""

import numpy as np
import pytest
import torch

from lcklab.core.exceptions import DimensionError, GeometryError, NotLCKError, PreconditionError, RankError, StructuralError
from lcklab.flows.actions import pullback
from lcklab.flows.linear import LinearMap
from lcklab.forms.fields import KForm, ScalarField
from lcklab.forms.operators import ddc, exterior_d, multiply
from lcklab.forms.sampling import form_residual, sample_points, sup_norm
from lcklab.geometry.lck import (
    LCKStructure,
    WeightCharacter,
    check_automorphy,
    conformal_rescale,
    exp_scalar,
    extract_lee_form,
    validate_lck,
)
from lcklab.geometry.metric import HermitianMetric
from lcklab.geometry.vaisman import is_vaisman, vaisman_potential
from lcklab.models.hopf import flat_kahler_form, hopf_lck_structure, square_norm
from lcklab.services.averaging import perturbation_profile
from tests.oracles import christoffel_symbols, covariant_derivative, relative_error

TOL = 1e-8


def twisted_form(epsilon: float = 0.1) -> KForm:
    """a dx1^dy1 + b dx2^dy2 with a = -4 (1 + eps x1 x2): Hermitian with a non-closed Lee form."""

    def coefficients(x: torch.Tensor) -> torch.Tensor:
        a = -4.0 * (1.0 + epsilon * x[0] * x[2])
        zero = 0.0 * x[0]
        return torch.stack([a, zero, zero, zero, zero, -4.0 + zero])

    return KForm(n=2, degree=2, coefficients=coefficients, label="twisted")


def non_factorizable_form(epsilon: float = 0.2) -> KForm:
    """omega~ + eps x1 dx2 ^ dx3 on C^3: d(omega) has no factor theta ^ omega."""
    bump = ScalarField.from_function(3, lambda x: epsilon * x[0], label="eps*x1")
    return flat_kahler_form(3) + multiply(bump, KForm.coordinate(3, 2, 4))


class TestValidateLCK:
    """Definitional checks"""

    def test_hopf_structure_validates(self, points):
        """The Hopf form passes every check"""
        structure = validate_lck(hopf_lck_structure(2).omega, points, tolerance=TOL)
        assert structure.is_validated
        assert structure.residuals.defining <= TOL
        assert structure.residuals.closedness <= TOL
        assert structure.residuals.min_eigenvalue > 0

    def test_extracted_lee_form_matches_closed_form(self, points):
        """theta = -d log|z|^2"""
        result = extract_lee_form(hopf_lck_structure(2).omega, points, TOL)
        assert form_residual(result.theta, hopf_lck_structure(2).theta, points) <= TOL
        assert result.min_singular_ratio > 0

    def test_kahler_form_has_zero_lee_form(self, points):
        """A closed omega gives theta = 0"""
        theta = extract_lee_form(flat_kahler_form(2), points, TOL).theta
        assert float(theta(points).abs().max()) <= 1e-12

    def test_non_closed_lee_form_rejected(self, unit_points):
        """d(omega) = theta ^ omega solvable but d(theta) != 0"""
        with pytest.raises(NotLCKError):
            validate_lck(twisted_form(), unit_points, tolerance=TOL)

    def test_negative_form_rejected(self, points):
        """-omega~ is not positive"""
        with pytest.raises(GeometryError):
            validate_lck(flat_kahler_form(2) * -1.0, points)

    def test_wrong_lee_form_rejected(self, points):
        """Supplying theta = 0 for the Hopf form"""
        with pytest.raises(NotLCKError):
            validate_lck(hopf_lck_structure(2).omega, points, theta=KForm.zero(2, 1), tolerance=TOL)

    def test_degenerate_form(self, points):
        """dx1 ^ dy1 alone does not determine theta"""
        with pytest.raises(RankError):
            extract_lee_form(KForm.coordinate(2, 0, 1), points)

    def test_lee_form_is_natural_under_pullback(self, points):
        """The Lee form of F* omega is F* theta"""
        rng = np.random.default_rng(17)
        F = LinearMap(np.eye(4) + 0.25 * rng.standard_normal((4, 4)), label="F")
        hopf = hopf_lck_structure(2)
        theta = extract_lee_form(pullback(F, hopf.omega), points, TOL).theta
        assert form_residual(theta, pullback(F, hopf.theta), points) <= TOL

    def test_non_factorizable_form_reports_residual(self):
        """d(omega) outside the image of wedge with omega"""
        points = sample_points(3, 12, 41, radius_min=0.5, radius_max=2.0)
        with pytest.raises(NotLCKError) as error:
            extract_lee_form(non_factorizable_form(), points, TOL)
        assert error.value.residual > 1e-3
        assert len(error.value.details["worst_point"]) == 6

    def test_complex_dimension_one(self):
        """The Lee form needs n >= 2"""
        with pytest.raises(DimensionError):
            extract_lee_form(flat_kahler_form(1), [[1.0, 0.5]])


class TestConformalRescale:
    """omega' = e^{-f} omega"""

    def test_lee_form_shifts_by_df(self, points):
        """theta' = theta - df"""
        hopf = validate_lck(hopf_lck_structure(2).omega, points, theta=hopf_lck_structure(2).theta)
        f = perturbation_profile(2) * 0.1
        rescaled = conformal_rescale(hopf, f, points, TOL)
        assert form_residual(rescaled.theta, hopf.theta - exterior_d(f), points) <= TOL

    def test_kahler_to_hopf(self, points):
        """Rescaling omega~ by |z|^2 gives the Hopf structure"""
        kahler = LCKStructure(omega=flat_kahler_form(2), theta=KForm.zero(2, 1), label="flat")
        f = ScalarField.from_function(2, lambda x: torch.log(x @ x), label="log|z|^2")
        rescaled = conformal_rescale(kahler, f, points, TOL)
        assert form_residual(rescaled.omega, hopf_lck_structure(2).omega, points) <= TOL
        assert form_residual(rescaled.theta, hopf_lck_structure(2).theta, points) <= TOL

    def test_inverse_rescale_restores_structure(self, points):
        """Rescaling by f and then by -f is the identity"""
        hopf = validate_lck(hopf_lck_structure(2).omega, points, theta=hopf_lck_structure(2).theta)
        f = perturbation_profile(2) * 0.1
        restored = conformal_rescale(conformal_rescale(hopf, f, points, TOL), f * -1.0, points, TOL)
        assert form_residual(restored.omega, hopf.omega, points) <= 1e-10
        assert form_residual(restored.theta, hopf.theta, points) <= TOL


class TestAutomorphy:
    """Deck pullbacks and the weight character"""

    def test_kahler_form_scales_by_chi(self, hopf, points):
        """A* omega~ = |alpha|^2 omega~"""
        assert check_automorphy(hopf.require_catalog().kahler_form, hopf.deck, hopf.chi, points) <= 1e-12

    def test_hopf_form_is_invariant(self, hopf, points):
        """The LCK form descends: A* omega = omega"""
        assert check_automorphy(hopf_lck_structure(2).omega, hopf.deck, 1.0, points) <= 1e-10

    def test_potential_scales_by_chi(self, hopf, points):
        """|A z|^2 = |alpha|^2 |z|^2"""
        assert check_automorphy(square_norm(2), hopf.deck, hopf.chi, points) <= 1e-10

    def test_character_values(self):
        """chi(A) = |alpha|^2, multiplicative on words"""
        character = WeightCharacter.of_deck(LinearMap.scalar(2, 0.5))
        assert character.values["A"] == pytest.approx(0.25)
        assert character(["A", "A"]) == pytest.approx(0.0625)
        assert character.power("A", -1) == pytest.approx(4.0)

    def test_wrong_character_is_detected(self, hopf, kahler, points):
        """A* omega~ is not 2 chi omega~"""
        assert check_automorphy(kahler, hopf.deck, 2.0 * hopf.chi, points) > 0.1

    @pytest.mark.parametrize("k", [2, 3])
    def test_character_multiplicative_on_compositions(self, k, hopf, kahler, points):
        """(A^k)* omega~ = chi(A ... A) omega~, with the pullbacks composed one at a time"""
        character = WeightCharacter.of_deck(hopf.deck)
        expected = character(["A"] * k)
        assert expected == pytest.approx(hopf.chi**k)
        pulled = kahler
        for _ in range(k):
            pulled = pullback(hopf.deck, pulled)
        assert form_residual(pulled, kahler * expected, points) <= 1e-12
        assert check_automorphy(kahler, hopf.deck.power(k), expected, points) <= 1e-12

    def test_character_rejects_unknown_generator(self):
        with pytest.raises(StructuralError):
            WeightCharacter({"A": 0.25})(["B"])

    def test_character_must_be_positive(self):
        with pytest.raises(StructuralError):
            WeightCharacter({"A": 0.0})


class TestVaisman:
    """Parallel Lee form"""

    def test_hopf_is_vaisman(self, points):
        """nabla theta = 0 for the Hopf metric"""
        structure = validate_lck(hopf_lck_structure(2).omega, points, theta=hopf_lck_structure(2).theta)
        report = is_vaisman(structure, points)
        assert report.is_vaisman
        assert report.levi_civita_residual <= 1e-8
        assert report.to_dict()["is_vaisman"] is True

    def test_perturbed_structure_is_not_vaisman(self, points):
        """A non-invariant conformal factor breaks parallelism"""
        omega = multiply(exp_scalar(perturbation_profile(2) * 0.1), hopf_lck_structure(2).omega)
        structure = validate_lck(omega, points, tolerance=TOL)
        assert not is_vaisman(structure, points).is_vaisman

    def test_potential_is_square_norm(self, points):
        """g~(theta#, theta#) = |z|^2 with dd^c of it equal to omega~"""
        structure = validate_lck(hopf_lck_structure(2).omega, points, theta=hopf_lck_structure(2).theta)
        phi = vaisman_potential(structure, flat_kahler_form(2), points)
        assert torch.allclose(phi.value(points), square_norm(2).value(points), rtol=1e-10)
        assert form_residual(ddc(phi), flat_kahler_form(2), points) <= TOL

    def test_potential_is_homogeneous(self, hopf, points):
        """phi(t z) = t^2 phi(z) and A* phi = chi phi"""
        structure = validate_lck(hopf_lck_structure(2).omega, points, theta=hopf_lck_structure(2).theta)
        phi = vaisman_potential(structure, flat_kahler_form(2), points)
        for t in (0.5, 3.0):
            assert torch.allclose(phi.value(points * t), t**2 * phi.value(points), rtol=1e-10)
        assert check_automorphy(phi, hopf.deck, hopf.chi, points) <= 1e-10

    def test_covariant_derivative_matches_finite_differences(self, unit_points):
        """nabla theta against differenced Christoffel symbols, Vaisman or not"""
        hopf = validate_lck(hopf_lck_structure(2).omega, unit_points, theta=hopf_lck_structure(2).theta)
        assert sup_norm(covariant_derivative(hopf.metric, hopf.theta, unit_points)) <= 1e-5

        omega = multiply(exp_scalar(perturbation_profile(2) * 0.1), hopf_lck_structure(2).omega)
        perturbed = validate_lck(omega, unit_points, tolerance=TOL)
        exact = perturbed.metric.covariant_derivative(perturbed.theta, unit_points)
        oracle = covariant_derivative(perturbed.metric, perturbed.theta, unit_points)
        assert relative_error(exact, oracle) <= 1e-5
        assert is_vaisman(perturbed, unit_points).residual == pytest.approx(sup_norm(oracle), rel=1e-4)

    def test_vanishing_lee_form(self, points):
        """A Kähler structure has no Vaisman potential"""
        kahler = LCKStructure(omega=flat_kahler_form(2), theta=KForm.zero(2, 1))
        with pytest.raises(PreconditionError):
            vaisman_potential(kahler, flat_kahler_form(2), points)


class TestHermitianMetric:
    """Metric of a 2-form"""

    def test_flat_metric_eigenvalues(self, points):
        """g = 4 Id for omega~"""
        metric = HermitianMetric(flat_kahler_form(2))
        assert np.allclose(metric.min_eigenvalues(points).numpy(), 4.0)
        assert metric.symmetry_residual(points) <= 1e-14

    def test_levi_civita_self_check(self, points):
        """nabla g = 0 for the computed Christoffel symbols"""
        assert HermitianMetric(hopf_lck_structure(2).omega).levi_civita_residual(points) <= 1e-8

    def test_christoffel_matches_finite_differences(self, unit_points):
        """Koszul formula on exact jets against differenced metric matrices"""
        metric = HermitianMetric(hopf_lck_structure(2).omega)
        assert relative_error(metric.christoffel(unit_points), christoffel_symbols(metric, unit_points)) <= 1e-5
