"""Linear flows, circle actions, pullbacks and quadrature averaging."""

from .actions import (
    average_form_over_circle,
    average_scalar_over_circle,
    flow_pullback_form,
    loop_integral,
    pullback,
    weighted_flow_integral,
)
from .linear import CircleAction, LinearFlow, LinearMap
from .quadrature import QuadratureRule, QuadratureScheme

__all__ = [
    "CircleAction",
    "LinearFlow",
    "LinearMap",
    "QuadratureRule",
    "QuadratureScheme",
    "average_form_over_circle",
    "average_scalar_over_circle",
    "flow_pullback_form",
    "loop_integral",
    "pullback",
    "weighted_flow_integral",
]
