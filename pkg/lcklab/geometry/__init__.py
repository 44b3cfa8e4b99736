"""LCK structures, Hermitian metrics and the Vaisman condition."""

from .lck import (
    LCKResiduals,
    LCKStructure,
    LeeFormResult,
    WeightCharacter,
    check_automorphy,
    conformal_rescale,
    extract_lee_form,
    lee_form_of,
    validate_lck,
)
from .metric import HermitianMetric, square_length
from .vaisman import VaismanReport, is_vaisman, vaisman_potential

__all__ = [
    "HermitianMetric",
    "LCKResiduals",
    "LCKStructure",
    "LeeFormResult",
    "VaismanReport",
    "WeightCharacter",
    "check_automorphy",
    "conformal_rescale",
    "extract_lee_form",
    "is_vaisman",
    "lee_form_of",
    "square_length",
    "vaisman_potential",
    "validate_lck",
]
