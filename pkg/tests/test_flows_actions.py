"""
Tests for linear maps, flows, circle actions, quadrature and flow averages.
"""

import numpy as np
import pytest
import torch

from lcklab.core.exceptions import ClosednessError, ConfigurationError, DegreeError, PeriodicityError, StructuralError
from lcklab.flows.actions import (
    average_form_over_circle,
    average_scalar_over_circle,
    flow_pullback_form,
    loop_integral,
    pullback,
    weighted_flow_integral,
)
from lcklab.flows.linear import CircleAction, LinearFlow, LinearMap
from lcklab.flows.quadrature import QuadratureRule, QuadratureScheme
from lcklab.forms.fields import KForm, ScalarField
from lcklab.forms.operators import apply_I, exterior_d, lie_derivative, wedge
from lcklab.forms.sampling import form_residual, sup_norm
from lcklab.models.hopf import deck_circle_action, flat_kahler_form, hopf_lck_structure, rotation_circle_action


def uniform_rotation() -> CircleAction:
    generator = LinearMap.from_complex(np.eye(2) * 1j, label="J")
    return CircleAction(LinearFlow(generator), 2.0 * np.pi, label="rotation")


def quadratic_one_form() -> KForm:
    return KForm(n=2, degree=1, coefficients=lambda x: torch.stack([x[2], 0.0 * x[0], x[0], x[1] ** 2]), label="a")


def exponential_one_form() -> KForm:
    """Smooth, not invariant under rotation and not a trigonometric polynomial along orbits."""
    return KForm(
        n=2,
        degree=1,
        coefficients=lambda x: torch.exp(x[0]) * torch.stack([x[1], x[2], 1.0 + 0.0 * x[0], x[3]]),
        label="e",
    )


class TestQuadratureRule:
    """Node/weight rules"""

    def test_minimum_node_count(self):
        """Fewer than four nodes is a configuration error"""
        with pytest.raises(ConfigurationError):
            QuadratureRule(3)

    def test_trapezoid_exact_for_trigonometric_polynomials(self):
        """Periodic trapezoid integrates cos^2 over a period exactly"""
        rule = QuadratureRule(16)
        assert rule.integrate(lambda t: np.cos(t) ** 2, 0.0, 2.0 * np.pi) == pytest.approx(np.pi, abs=1e-13)

    def test_gauss_legendre_exact_for_polynomials(self):
        """N nodes integrate degree 2N - 1 exactly"""
        rule = QuadratureRule(4, QuadratureScheme.GAUSS_LEGENDRE)
        assert rule.integrate(lambda t: t**7, 0.0, 1.0) == pytest.approx(1.0 / 8.0, abs=1e-14)

    def test_weights_sum_to_length(self):
        """Both schemes integrate constants exactly"""
        for scheme in QuadratureScheme:
            _, weights = QuadratureRule(32, scheme).nodes(-1.0, 2.5)
            assert weights.sum() == pytest.approx(3.5, abs=1e-13)

    def test_to_dict(self):
        """Serialized form names the scheme"""
        assert QuadratureRule(8).with_scheme(QuadratureScheme.GAUSS_LEGENDRE).to_dict() == {
            "n": 8,
            "scheme": "gauss_legendre",
        }


class TestLinearMap:
    """Realified complex matrices"""

    def test_scalar_is_similarity(self):
        """alpha Id is complex linear with n equal eigenvalues"""
        alpha = LinearMap.scalar(2, 0.3 + 0.4j)
        assert alpha.is_complex_linear and alpha.is_similarity()
        assert np.allclose(alpha.eigenvalues(), [0.3 + 0.4j, 0.3 + 0.4j])
        assert alpha.spectral_radius() == pytest.approx(0.5)

    def test_complex_matrix_round_trip(self):
        """from_complex and complex_matrix are inverse"""
        c = np.array([[0.5, 0.1j], [0.0, 0.25 - 0.1j]])
        assert np.allclose(LinearMap.from_complex(c).complex_matrix(), c)

    def test_non_complex_linear_rejected(self):
        """A real reflection has no complex matrix"""
        with pytest.raises(StructuralError):
            LinearMap(np.diag([1.0, -1.0, 1.0, 1.0])).complex_matrix()

    def test_odd_size_rejected(self):
        with pytest.raises(StructuralError):
            LinearMap(np.eye(3))

    def test_power_and_inverse(self):
        """A^-2 A^2 = Id"""
        a = LinearMap.scalar(2, 0.5)
        assert np.allclose(a.power(-2).compose(a.power(2)).matrix, np.eye(4))


class TestCircleAction:
    """Closing conditions of circle actions"""

    def test_rotation_closes_up(self):
        """exp(2 pi J) = Id"""
        assert uniform_rotation().period == pytest.approx(2.0 * np.pi)

    def test_wrong_period_rejected(self):
        """A flow that does not close up after the period"""
        generator = LinearMap.from_complex(np.eye(2) * 1j)
        with pytest.raises(PeriodicityError):
            CircleAction(LinearFlow(generator), 1.0)

    def test_non_positive_period_rejected(self):
        generator = LinearMap.from_complex(np.eye(2) * 1j)
        with pytest.raises(StructuralError):
            CircleAction(LinearFlow(generator), 0.0)

    def test_reparametrized(self):
        """c G with period T / c still closes"""
        action = uniform_rotation().reparametrized(2.0)
        assert action.period == pytest.approx(np.pi)
        assert np.allclose(action.generator.matrix, 2.0 * uniform_rotation().generator.matrix)


class TestLinearFlow:
    """exp(t G) and pullbacks along it"""

    def test_group_law(self):
        """exp((s + t) G) = exp(s G) exp(t G)"""
        rng = np.random.default_rng(3)
        flow = LinearFlow(LinearMap(0.4 * rng.standard_normal((4, 4)), label="G"))
        s, t = 0.7, -1.3
        assert np.allclose(flow.at(s + t).matrix, flow.at(s).compose(flow.at(t)).matrix, atol=1e-12)

    def test_pullback_additive_in_time(self, unit_points):
        """exp((s + t) G)* a = exp(t G)* exp(s G)* a"""
        flow = LinearFlow(LinearMap.from_complex(np.diag([0.3 + 1j, -0.2 + 0.5j]), label="G"))
        omega = hopf_lck_structure(2).omega
        composed = flow_pullback_form(flow, 0.4, flow_pullback_form(flow, 0.9, omega))
        assert form_residual(flow_pullback_form(flow, 1.3, omega), composed, unit_points) <= 1e-10

    @pytest.mark.parametrize("t", [-0.5, 0.25, 1.0])
    def test_homothety_flow_scales_kahler_form(self, t, homothety, kahler, points):
        """exp(t A)* omega~ = e^{lambda t} omega~"""
        pulled = flow_pullback_form(LinearFlow(homothety.generator), t, kahler)
        assert form_residual(pulled, kahler * float(np.exp(homothety.lam * t)), points) <= 1e-10

    def test_pullback_respects_wedge(self, points):
        """F*(a ^ b) = F* a ^ F* b"""
        rng = np.random.default_rng(5)
        F = LinearMap(np.eye(4) + 0.3 * rng.standard_normal((4, 4)), label="F")
        a, b = quadratic_one_form(), hopf_lck_structure(2).omega
        assert form_residual(pullback(F, wedge(a, b)), wedge(pullback(F, a), pullback(F, b)), points) <= 1e-9

    def test_holomorphic_pullback_commutes_with_I(self, points):
        """F*(I a) = I(F* a) when F is complex linear"""
        F = LinearMap.from_complex(np.array([[0.8 + 0.2j, 0.1], [-0.3j, 1.1]]), label="F")
        for a in (quadratic_one_form(), hopf_lck_structure(2).omega):
            assert form_residual(pullback(F, apply_I(a)), apply_I(pullback(F, a)), points) <= 1e-9


class TestFlowAverages:
    """Averages and weighted integrals along flows"""

    def test_invariant_form_is_fixed(self, points):
        """Averaging a rotation-invariant form returns it"""
        kahler = flat_kahler_form(2)
        averaged = average_form_over_circle(uniform_rotation(), kahler, QuadratureRule(8))
        assert form_residual(averaged, kahler, points) <= 1e-10

    def test_average_is_invariant(self, points):
        """Lie_X avg(a) = 0 for a trigonometric-in-t integrand"""
        action = uniform_rotation()
        averaged = average_form_over_circle(action, quadratic_one_form(), QuadratureRule(16))
        assert sup_norm(lie_derivative(action.field(), averaged)(points)) <= 1e-9

    def test_averaging_is_a_projector(self, unit_points):
        """Averaging an average changes nothing"""
        action, rule = uniform_rotation(), QuadratureRule(16)
        once = average_form_over_circle(action, exponential_one_form(), rule)
        twice = average_form_over_circle(action, once, rule)
        assert form_residual(twice, once, unit_points) <= 1e-8

    def test_averaging_commutes_with_d(self, unit_points):
        """d avg(a) = avg(d a)"""
        action, rule = uniform_rotation(), QuadratureRule(16)
        a = exponential_one_form()
        lhs = exterior_d(average_form_over_circle(action, a, rule))
        rhs = average_form_over_circle(action, exterior_d(a), rule)
        assert form_residual(lhs, rhs, unit_points) <= 1e-9

    def test_doubling_nodes_converges(self, unit_points):
        """32 and 64 trapezoid nodes agree on a smooth non-invariant form"""
        action, a = uniform_rotation(), exponential_one_form()
        coarse = average_form_over_circle(action, a, QuadratureRule(32))
        fine = average_form_over_circle(action, a, QuadratureRule(64))
        assert sup_norm(lie_derivative(action.field(), a)(unit_points)) > 1e-2
        assert form_residual(coarse, fine, unit_points) <= 1e-8

    def test_scalar_average(self, points):
        """avg(x_1^2) = (x_1^2 + y_1^2) / 2 under the uniform rotation"""
        f = ScalarField.from_function(2, lambda x: x[0] ** 2, label="x1^2")
        averaged = average_scalar_over_circle(uniform_rotation(), f, QuadratureRule(8))
        expected = 0.5 * (points[:, 0] ** 2 + points[:, 1] ** 2)
        assert torch.allclose(averaged.value(points), expected, atol=1e-10)

    def test_weighted_integral_of_constant(self, points):
        """Identity flow: the integral is the weighted length"""
        kahler = flat_kahler_form(2)
        flow = LinearFlow(LinearMap(np.zeros((4, 4))))
        rule = QuadratureRule(8, QuadratureScheme.GAUSS_LEGENDRE)
        total = weighted_flow_integral(flow, kahler, (0.0, 2.0), rule, weight=lambda s: s)
        assert form_residual(total, kahler * 2.0, points) <= 1e-12

    def test_zero_weight_gives_zero(self, points):
        flow = LinearFlow(LinearMap.scalar(2, 1j))
        total = weighted_flow_integral(flow, flat_kahler_form(2), (0.0, 1.0), QuadratureRule(8), weight=np.zeros_like)
        assert total.is_zero


class TestLoopIntegral:
    """Loop integrals of 1-forms along orbits"""

    def test_rotation_monodromy_of_hopf_lee_form(self, hopf):
        """theta = -d log|z|^2 integrates to 0 around rotation orbits"""
        theta = hopf_lck_structure(2).theta
        value = loop_integral(theta, rotation_circle_action(hopf), [1.0, 0.5, -0.3, 2.0], QuadratureRule(16))
        assert abs(value) <= 1e-12

    @pytest.mark.parametrize("speed", [0.5, 3.0])
    def test_reparametrization_leaves_integral_unchanged(self, speed, hopf3):
        """Same loop traversed at another speed"""
        action = deck_circle_action(hopf3)
        theta = hopf_lck_structure(3).theta
        base = [0.4, -1.0, 0.3, 0.2, 1.5, -0.6]
        reference = loop_integral(theta, action, base, QuadratureRule(16))
        assert loop_integral(theta, action.reparametrized(speed), base, QuadratureRule(16)) == pytest.approx(
            reference, abs=1e-12
        )

    def test_non_closed_form_rejected(self):
        """The closedness precheck raises"""
        theta = KForm(n=2, degree=1, coefficients=lambda x: torch.stack([x[1], -x[0], x[3], -x[2]]), label="rot")
        with pytest.raises(ClosednessError):
            loop_integral(theta, uniform_rotation(), [1.0, 0.0, 0.0, 1.0], QuadratureRule(16))

    def test_two_form_rejected(self):
        with pytest.raises(DegreeError):
            loop_integral(flat_kahler_form(2), uniform_rotation(), [1.0, 0.0, 0.0, 1.0], QuadratureRule(8))
