"""
Pullbacks along linear maps and flow integrals of forms.

Every integral over a flow goes through ``weighted_flow_integral``: the
result is a new KForm whose coefficient function sums the pulled-back
integrand over quadrature nodes, so it can be differentiated under the sum
like any other field.
"""

import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import torch
from torch.func import vmap

from lcklab.config.settings import settings
from lcklab.core.exceptions import ClosednessError, DegreeError, StructuralError
from lcklab.flows.linear import CircleAction, LinearFlow, LinearMap
from lcklab.flows.quadrature import QuadratureRule
from lcklab.forms.combinatorics import DTYPE, compound_matrix
from lcklab.forms.fields import KForm, Point, PointsLike, ScalarField, as_points
from lcklab.forms.operators import exterior_d
from lcklab.forms.sampling import sup_norm

logger = logging.getLogger(__name__)

Weight = Callable[[np.ndarray], np.ndarray]


def _check_dimension(linear_map: LinearMap, a: KForm) -> None:
    if linear_map.n != a.n:
        raise StructuralError(f"Map acts on C^{linear_map.n}, form lives on C^{a.n}")


def pullback(linear_map: LinearMap, a: KForm) -> KForm:
    """(F* a)_p(v_1, ..., v_k) = a_{F p}(F v_1, ..., F v_k)."""
    _check_dimension(linear_map, a)
    linear_map.require_invertible()
    if a.is_zero:
        return a
    f = linear_map.tensor()
    action = torch.tensor(compound_matrix(linear_map.matrix, a.degree).T, dtype=DTYPE)
    fa = a.coefficients
    return a._derive(lambda x: action @ fa(f @ x), smoothness=a.smoothness, label=f"{linear_map.label}*{a.label}")


def flow_pullback_form(flow: LinearFlow, t: float, a: KForm) -> KForm:
    """exp(t G)* a."""
    return pullback(flow.at(t), a)


def weighted_flow_integral(
    flow: LinearFlow,
    a: KForm,
    interval: Tuple[float, float],
    q: QuadratureRule,
    weight: Optional[Weight] = None,
) -> KForm:
    """
    sum_i w_i weight(t_i) exp(t_i G)* a over the nodes of ``q`` on ``interval``.

    Unnormalized: callers divide by the interval length when they want a mean.
    """
    if flow.n != a.n:
        raise StructuralError(f"Flow acts on C^{flow.n}, form lives on C^{a.n}")
    if a.is_zero:
        return a
    times, weights = q.nodes(*interval)
    if weight is not None:
        weights = weights * weight(times)
    keep = weights != 0.0
    times, weights = times[keep], weights[keep]
    if times.size == 0:
        return a._zero_like()

    maps = flow.matrices(times)
    flows = torch.tensor(maps, dtype=DTYPE)
    actions = torch.tensor(np.stack([compound_matrix(m, a.degree).T for m in maps]), dtype=DTYPE)
    w = torch.tensor(weights, dtype=DTYPE)
    fa = a.coefficients
    batched = vmap(fa)

    def coefficients(x: torch.Tensor) -> torch.Tensor:
        values = batched(flows @ x)
        return torch.einsum("t,tij,tj->i", w, actions, values)

    logger.debug(
        f"Flow integral of '{a.label}' over [{interval[0]:.4g}, {interval[1]:.4g}] "
        f"with {times.size} nodes ({q.scheme.value})"
    )
    return a._derive(coefficients, smoothness=a.smoothness, label=f"int[{flow.generator.label}]({a.label})")


def average_form_over_circle(action: CircleAction, a: KForm, q: QuadratureRule) -> KForm:
    """Normalized mean (1/T) int_0^T exp(t G)* a dt over one period."""
    total = weighted_flow_integral(action.flow, a, (0.0, action.period), q)
    return total * (1.0 / action.period)


def average_scalar_over_circle(action: CircleAction, f: ScalarField, q: QuadratureRule) -> ScalarField:
    """Degree-0 case of ``average_form_over_circle``, same (1/T) normalization."""
    if f.degree != 0:
        raise DegreeError(f"Expected a scalar field, got degree {f.degree}")
    return ScalarField.of(average_form_over_circle(action, f, q))


def orbit(action: CircleAction, base: PointsLike, q: QuadratureRule) -> Tuple[torch.Tensor, np.ndarray, np.ndarray]:
    """Orbit points exp(t_i G) base at the quadrature nodes on [0, T]."""
    x0 = as_points(base, 2 * action.n)[0]
    times, weights = q.nodes(0.0, action.period)
    flows = torch.tensor(action.flow.matrices(times), dtype=DTYPE)
    return flows @ x0, times, weights


def closedness_residual(theta: KForm, points: PointsLike) -> float:
    return sup_norm(exterior_d(theta)(points))


def loop_integral(
    theta: KForm,
    action: CircleAction,
    base: PointsLike,
    q: QuadratureRule,
    tolerance: Optional[float] = None,
) -> float:
    """
    int_0^T theta(d/dt exp(t G) base) dt along one orbit.

    theta is checked for closedness on the orbit first; a residual above
    ``tolerance`` raises ClosednessError.
    """
    if theta.degree != 1:
        raise DegreeError(f"loop_integral integrates 1-forms, got degree {theta.degree}")
    if theta.n != action.n:
        raise StructuralError(f"Action acts on C^{action.n}, form lives on C^{theta.n}")
    tolerance = settings.TOL_JET if tolerance is None else tolerance
    points, _, weights = orbit(action, base, q)

    if not theta.is_zero:
        step = max(1, points.shape[0] // 8)
        residual = closedness_residual(theta, points[::step])
        if residual > tolerance:
            logger.warning(f"loop_integral: d(theta) residual {residual:.3e} exceeds {tolerance:.1e}")
            raise ClosednessError("Lee form is not closed along the orbit", residual=residual)

    generator = action.generator.tensor()
    velocities = points @ generator.T
    integrand = (theta(points) * velocities).sum(dim=-1)
    return float(torch.dot(torch.tensor(weights, dtype=DTYPE), integrand))


def base_points(n: int, seeds: Sequence[int] = (0, 1)) -> Tuple[Point, ...]:
    """Deterministic base points for base-point independence checks."""
    out = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        out.append(Point(tuple(rng.standard_normal(2 * n))))
    return tuple(out)
