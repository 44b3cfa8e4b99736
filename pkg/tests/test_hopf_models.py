"""
Tests for Hopf models, homothety fields and their circle actions.
"""

import numpy as np
import pytest

from lcklab.core.exceptions import (
    BranchError,
    ContractionError,
    DimensionError,
    KillingError,
    PreconditionError,
    StructuralError,
)
from lcklab.flows.actions import loop_integral
from lcklab.flows.linear import LinearMap
from lcklab.flows.quadrature import QuadratureRule
from lcklab.forms.fields import VectorField
from lcklab.forms.operators import lie_derivative
from lcklab.forms.sampling import form_residual, sample_points
from lcklab.models.hopf import (
    deck_circle_action,
    homothety_field,
    hopf_lck_structure,
    killing_rotation,
    make_classical_hopf,
    make_linear_hopf,
    rotation_circle_action,
)


class TestModelConstruction:
    """Contractions and their weight characters"""

    def test_classical_character(self, hopf):
        """chi = |alpha|^2 with a flat catalog"""
        assert hopf.chi == pytest.approx(0.25)
        assert hopf.has_flat_catalog
        assert hopf.n == 2

    def test_complex_alpha(self, hopf3):
        """|0.4 + 0.3i|^2 = 0.25"""
        assert hopf3.chi == pytest.approx(0.25)
        assert hopf3.deck.is_similarity()

    def test_non_similarity_has_no_catalog(self, diagonal_hopf):
        """chi = |det_R A|^{1/n}, no flat Kähler catalog"""
        assert diagonal_hopf.chi == pytest.approx(0.125)
        assert not diagonal_hopf.has_flat_catalog
        with pytest.raises(PreconditionError):
            diagonal_hopf.require_catalog()

    @pytest.mark.parametrize("alpha", [1.0, 1.5, 0.0, 0.6 + 0.8j])
    def test_non_contraction_rejected(self, alpha):
        """|alpha| must lie in (0, 1)"""
        with pytest.raises(ContractionError):
            make_classical_hopf(2, alpha)

    def test_expanding_eigenvalue_listed(self):
        """The offending eigenvalues travel with the error"""
        with pytest.raises(ContractionError) as info:
            make_linear_hopf(2, np.diag([0.5, 0.5, 2.0, 2.0]))
        assert info.value.details["eigenvalues"]

    def test_dimension_one_rejected(self):
        with pytest.raises(DimensionError):
            make_classical_hopf(1, 0.5)

    def test_real_linear_contraction_rejected(self):
        """Contractions must commute with I"""
        with pytest.raises(StructuralError):
            make_linear_hopf(2, np.diag([0.5, 0.25, 0.5, 0.5]))


class TestHomothetyField:
    """A = (lambda / 2) E + K"""

    def test_lie_derivative_scales_kahler_form(self, homothety, kahler, points):
        """Lie_A omega~ = lambda omega~"""
        assert form_residual(lie_derivative(homothety.field, kahler), kahler * homothety.lam, points) <= 1e-10

    def test_companion_is_I_of_field(self, euler_homothety):
        """For A = E the companion generates the uniform rotation"""
        assert np.allclose(euler_homothety.companion.generator, np.kron(np.eye(2), [[0.0, -1.0], [1.0, 0.0]]))

    def test_killing_part_contracts_along_companion(self, homothety):
        """A^c scales z_j by e^{-r_j t} on top of the rotation"""
        flow = homothety.companion_flow.at(1.0).complex_matrix()
        assert np.allclose(np.abs(np.diag(flow)), np.exp([-0.5, 0.25]))

    def test_scaled(self, homothety):
        """c A has constant c lambda"""
        assert homothety.scaled(0.5).lam == pytest.approx(1.0)

    def test_non_holomorphic_killing_part(self, hopf):
        """A real rotation in the (x1, x2) plane does not commute with I"""
        generator = np.zeros((4, 4))
        generator[0, 2], generator[2, 0] = -1.0, 1.0
        with pytest.raises(KillingError):
            homothety_field(hopf, 2.0, killing_part=VectorField.linear(generator, label="R"))

    def test_non_isometric_part(self, hopf):
        """A holomorphic stretch is not Killing"""
        stretch = LinearMap.from_complex(np.diag([1.0, 0.0]))
        with pytest.raises(KillingError):
            homothety_field(hopf, 2.0, killing_part=stretch.as_field())

    def test_non_positive_lambda(self, hopf):
        with pytest.raises(PreconditionError):
            homothety_field(hopf, 0.0)

    def test_needs_catalog(self, diagonal_hopf):
        with pytest.raises(PreconditionError):
            homothety_field(diagonal_hopf, 2.0)


class TestCircleActions:
    """Deck and rotation actions with their monodromy"""

    @pytest.mark.parametrize("model_name", ["hopf", "hopf3"])
    def test_deck_monodromy(self, model_name, request):
        """The Lee form integrates to -log chi along the deck direction"""
        model = request.getfixturevalue(model_name)
        action = deck_circle_action(model)
        theta = hopf_lck_structure(model.n).theta
        for base in sample_points(model.n, 3, 11):
            value = loop_integral(theta, action, base, QuadratureRule(16))
            assert value == pytest.approx(-np.log(model.chi), abs=1e-10)

    @pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
    def test_deck_monodromy_of_real_contraction(self, c):
        """alpha = e^{-c} gives a deck period of 2c"""
        model = make_classical_hopf(2, float(np.exp(-c)))
        theta = hopf_lck_structure(2).theta
        value = loop_integral(theta, deck_circle_action(model), [0.3, -1.2, 0.8, 0.5], QuadratureRule(16))
        assert value == pytest.approx(2.0 * c, abs=1e-10)

    def test_deck_time_one_map(self, diagonal_hopf):
        """exp(log A) = A for positive real eigenvalues"""
        action = deck_circle_action(diagonal_hopf)
        assert np.allclose(action.flow.at(1.0).matrix, diagonal_hopf.deck.matrix)

    def test_complex_eigenvalues_have_no_branch(self):
        """A non-similarity with a complex eigenvalue"""
        model = make_linear_hopf(2, LinearMap.from_complex(np.diag([0.5j, 0.25]), label="A"))
        with pytest.raises(BranchError):
            deck_circle_action(model)

    def test_rotation_with_rates(self, hopf):
        """Integer rates still close after 2 pi"""
        action = rotation_circle_action(hopf, rates=[1.0, 2.0])
        assert action.period == pytest.approx(2.0 * np.pi)

    def test_rotation_rates_shape(self):
        with pytest.raises(StructuralError):
            killing_rotation(2, [1.0])
