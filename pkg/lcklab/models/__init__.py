"""Hopf manifold models and their homothety fields."""

from .hopf import (
    HomothetyField,
    HopfCatalog,
    HopfModel,
    deck_circle_action,
    homothety_field,
    killing_rotation,
    make_classical_hopf,
    make_linear_hopf,
    rotation_circle_action,
)

__all__ = [
    "HomothetyField",
    "HopfCatalog",
    "HopfModel",
    "deck_circle_action",
    "homothety_field",
    "killing_rotation",
    "make_classical_hopf",
    "make_linear_hopf",
    "rotation_circle_action",
]
