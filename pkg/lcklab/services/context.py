"""Run context shared by the verification suites."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import torch

from lcklab.config.settings import settings
from lcklab.core.exceptions import PreconditionError
from lcklab.flows.linear import LinearMap
from lcklab.flows.quadrature import QuadratureRule
from lcklab.forms.sampling import SampleManifest, sample_manifest, sample_points
from lcklab.geometry.lck import LCKStructure, validate_lck
from lcklab.models.hopf import (
    HomothetyField,
    HopfModel,
    homothety_field,
    killing_rotation,
    make_classical_hopf,
    make_linear_hopf,
)

logger = logging.getLogger(__name__)


@dataclass
class RunContext:
    """Model, homothety field, samples and tolerances for one run."""

    model: HopfModel
    homothety: Optional[HomothetyField]
    points: torch.Tensor
    manifest: SampleManifest
    quadrature: QuadratureRule
    tol_jet: float
    tol_quad: float
    seed: int
    killing_rates: Optional[List[float]] = None
    _cache: Dict[str, Any] = field(default_factory=dict, repr=False)

    def cached(self, key: str, build: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def require_homothety(self) -> HomothetyField:
        if self.homothety is None:
            raise PreconditionError(f"Model '{self.model.label}' has no homothety field (no flat Kähler catalog)")
        return self.homothety

    @property
    def pipeline_points(self) -> torch.Tensor:
        return self.points[: settings.PIPELINE_SAMPLES]

    def hopf_structure(self) -> LCKStructure:
        """The catalog LCK structure, validated once on the run sample."""
        catalog = self.model.require_catalog()
        return self.cached(
            "hopf_structure",
            lambda: validate_lck(catalog.lck.omega, self.points, theta=catalog.lck.theta, tolerance=self.tol_jet, label="hopf"),
        )


def build_model(kind: str, n: int, alpha: complex, matrix: Optional[List[List[float]]] = None) -> HopfModel:
    if kind == "classical":
        return make_classical_hopf(n, alpha)
    return make_linear_hopf(n, LinearMap(np.asarray(matrix, dtype=float), label="A"))


def build_context(
    kind: str,
    n: int,
    alpha: complex,
    lam: float,
    quadrature: QuadratureRule,
    sample_count: int,
    seed: int,
    tol_jet: float,
    tol_quad: float,
    killing_rates: Optional[List[float]] = None,
    matrix: Optional[List[List[float]]] = None,
) -> RunContext:
    model = build_model(kind, n, alpha, matrix)
    points = sample_points(model.n, sample_count, seed)
    homothety = None
    if model.has_flat_catalog:
        killing = killing_rotation(model.n, killing_rates) if killing_rates else None
        homothety = homothety_field(model, lam, killing_part=killing, points=points[:16])
    else:
        logger.warning(f"Model '{model.label}' has no flat catalog; field-dependent suites will report errors")
    return RunContext(
        model=model,
        homothety=homothety,
        points=points,
        manifest=sample_manifest(model.n, sample_count, seed),
        quadrature=quadrature,
        tol_jet=tol_jet,
        tol_quad=tol_quad,
        seed=seed,
        killing_rates=list(killing_rates) if killing_rates else None,
    )
