"""
Sample points, test vectors and sup-norm residuals.

Points are drawn with log-uniform radii times uniform sphere directions:
Hopf geometry is scale covariant, so log-uniform radii exercise the deck
direction as evenly as the angular ones.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import torch

from lcklab.config.settings import settings
from lcklab.forms.combinatorics import DTYPE, gather_rows
from lcklab.forms.fields import KForm, PointsLike, as_points


@dataclass(frozen=True)
class SampleManifest:
    """What a residual was measured on; copied into reports."""

    n: int
    count: int
    seed: int
    radius_min: float
    radius_max: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "count": self.count,
            "seed": self.seed,
            "radius_min": self.radius_min,
            "radius_max": self.radius_max,
        }


def sample_points(
    n: int,
    count: int,
    seed: int,
    radius_min: Optional[float] = None,
    radius_max: Optional[float] = None,
) -> torch.Tensor:
    """(count, 2n) points of C^n minus the origin."""
    radius_min = settings.RADIUS_MIN if radius_min is None else radius_min
    radius_max = settings.RADIUS_MAX if radius_max is None else radius_max
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((count, 2 * n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = np.exp(rng.uniform(np.log(radius_min), np.log(radius_max), size=count))
    return torch.tensor(directions * radii[:, None], dtype=DTYPE)


def sample_manifest(n: int, count: int, seed: int) -> SampleManifest:
    return SampleManifest(n, count, seed, settings.RADIUS_MIN, settings.RADIUS_MAX)


def sample_vectors(count: int, k: int, m: int, seed: int) -> torch.Tensor:
    """(count, k, m) standard Gaussian tangent vectors."""
    rng = np.random.default_rng(seed)
    return torch.tensor(rng.standard_normal((count, k, m)), dtype=DTYPE)


def sup_norm(values: torch.Tensor) -> float:
    if values.numel() == 0:
        return 0.0
    return float(values.abs().max())


def worst_index(values: torch.Tensor) -> int:
    """Row index holding the largest absolute entry of a (N, ...) tensor."""
    per_row = values.abs().reshape(values.shape[0], -1).max(dim=1).values
    return int(per_row.argmax())


def form_residual(a: KForm, b: KForm, points: PointsLike) -> float:
    """max over points and components of |a - b|."""
    batch = as_points(points, a.dimension)
    return sup_norm(a(batch) - b(batch))


def form_residual_with_point(a: KForm, b: KForm, points: PointsLike) -> Tuple[float, torch.Tensor]:
    batch = as_points(points, a.dimension)
    difference = a(batch) - b(batch)
    return sup_norm(difference), batch[worst_index(difference)]


def paired_evaluations(values: torch.Tensor, vectors: torch.Tensor) -> torch.Tensor:
    """
    Evaluate component rows on several vector tuples per point.

    values has shape (N, C) for a k-form on R^m, vectors (N, P, k, m);
    the result has shape (N, P).
    """
    k, m = vectors.shape[-2], vectors.shape[-1]
    columns = vectors.transpose(-1, -2)
    minors = torch.linalg.det(columns[..., gather_rows(m, k), :])
    return (values[:, None, :] * minors).sum(dim=-1)
