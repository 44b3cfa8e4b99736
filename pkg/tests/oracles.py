"""
Finite-difference oracles.

Independent of the jet machinery: everything here only evaluates
coefficient functions at displaced points.
"""

import numpy as np
import torch
from scipy.linalg import expm

from lcklab.flows.actions import pullback
from lcklab.flows.linear import LinearMap
from lcklab.forms.combinatorics import index_lookup

STEP = 1e-5


def partials(a, points: torch.Tensor, step: float = STEP) -> torch.Tensor:
    """Central differences of the components, shape (N, C, m)."""
    m = points.shape[-1]
    columns = []
    for i in range(m):
        shift = torch.zeros(m, dtype=points.dtype)
        shift[i] = step
        columns.append((a(points + shift) - a(points - shift)) / (2.0 * step))
    return torch.stack(columns, dim=-1)


def gradient(f, points: torch.Tensor, step: float = STEP) -> torch.Tensor:
    return partials(f, points, step)[:, 0, :]


def d_one_form(theta, points: torch.Tensor, step: float = STEP) -> torch.Tensor:
    """(d theta)_{ij} = d_i theta_j - d_j theta_i over i < j."""
    jac = partials(theta, points, step)
    m = points.shape[-1]
    out = torch.zeros(points.shape[0], m * (m - 1) // 2, dtype=points.dtype)
    for (i, j), pos in index_lookup(m, 2).items():
        out[:, pos] = jac[:, j, i] - jac[:, i, j]
    return out


def flow_lie_derivative(generator: np.ndarray, a, points: torch.Tensor, step: float = 1e-4) -> torch.Tensor:
    """d/dt exp(t G)* a at t = 0, as a centered difference of pullbacks."""
    forward = pullback(LinearMap(expm(step * generator)), a)(points)
    backward = pullback(LinearMap(expm(-step * generator)), a)(points)
    return (forward - backward) / (2.0 * step)


def relative_error(a: torch.Tensor, b: torch.Tensor) -> float:
    scale = max(float(b.abs().max()), 1.0)
    return float((a - b).abs().max()) / scale


def flow_lie_derivative_squared(generator: np.ndarray, a, points: torch.Tensor, step: float = 1e-3) -> torch.Tensor:
    """d^2/dt^2 exp(t G)* a at t = 0, second-order centered difference."""
    forward = pullback(LinearMap(expm(step * generator)), a)(points)
    backward = pullback(LinearMap(expm(-step * generator)), a)(points)
    return (forward - 2.0 * a(points) + backward) / step**2


def christoffel_symbols(metric, points: torch.Tensor, step: float = STEP) -> torch.Tensor:
    """Gamma[n, k, i, j] from central differences of the metric matrices."""
    count, m = points.shape
    g = metric.matrices(points)
    columns = []
    for axis in range(m):
        shift = torch.zeros(m, dtype=points.dtype)
        shift[axis] = step
        columns.append((metric.matrices(points + shift) - metric.matrices(points - shift)) / (2.0 * step))
    dg = torch.stack(columns, dim=-1)  # dg[n, i, j, l] = d_l g_ij
    # lower[n, i, j, l] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    lower = 0.5 * (dg.permute(0, 3, 2, 1) + dg.permute(0, 2, 3, 1) - dg)
    lower = lower.permute(0, 3, 1, 2)
    return torch.linalg.solve(g, lower.reshape(count, m, m * m)).reshape(count, m, m, m)


def covariant_derivative(metric, theta, points: torch.Tensor, step: float = STEP) -> torch.Tensor:
    """(nabla theta)[n, i, j] = d_i theta_j - Gamma^k_ij theta_k."""
    jac = partials(theta, points, step)
    gamma = christoffel_symbols(metric, points, step)
    return jac.transpose(-1, -2) - torch.einsum("nkij,nk->nij", gamma, theta(points))
