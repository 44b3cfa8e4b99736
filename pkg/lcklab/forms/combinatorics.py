"""
Multi-index bookkeeping for dense alternating forms.

A k-form on R^m is stored as its C(m, k) components a_I over strictly
increasing multi-indices I, in itertools.combinations order. All sign
tables are built once per (m, k) with numpy and cached as float64 torch
tensors.
"""

import itertools
from functools import lru_cache
from math import comb
from typing import Dict, List, Tuple

import numpy as np
import torch

DTYPE = torch.float64

MultiIndex = Tuple[int, ...]


@lru_cache(maxsize=None)
def multi_indices(m: int, k: int) -> Tuple[MultiIndex, ...]:
    return tuple(itertools.combinations(range(m), k))


@lru_cache(maxsize=None)
def index_lookup(m: int, k: int) -> Dict[MultiIndex, int]:
    return {index: pos for pos, index in enumerate(multi_indices(m, k))}


def permutation_sign(sequence: Tuple[int, ...]) -> int:
    """Sign of the permutation sorting a sequence of distinct integers."""
    items: List[int] = list(sequence)
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _wedge_table_np(m: int, p: int, q: int) -> np.ndarray:
    table = np.zeros((comb(m, p + q), comb(m, p), comb(m, q)))
    target = index_lookup(m, p + q)
    for i, left in enumerate(multi_indices(m, p)):
        left_set = set(left)
        for j, right in enumerate(multi_indices(m, q)):
            if left_set.intersection(right):
                continue
            joined = left + right
            table[target[tuple(sorted(joined))], i, j] = permutation_sign(joined)
    return table


@lru_cache(maxsize=None)
def wedge_table(m: int, p: int, q: int) -> torch.Tensor:
    """T[K, I, J] with (a ^ b)_K = sum T[K, I, J] a_I b_J."""
    return torch.tensor(_wedge_table_np(m, p, q), dtype=DTYPE)


def compound_matrix(matrix: np.ndarray, k: int) -> np.ndarray:
    """k-th compound: C[I, K] = det(matrix[I][:, K]).

    Pulling back a constant-coefficient k-form by ``matrix`` maps the
    component vector a to C^T a.
    """
    m = matrix.shape[0]
    indices = multi_indices(m, k)
    if k == 0:
        return np.ones((1, 1))
    out = np.empty((len(indices), len(indices)))
    for r, rows in enumerate(indices):
        for c, cols in enumerate(indices):
            out[r, c] = np.linalg.det(matrix[np.ix_(rows, cols)])
    return out


@lru_cache(maxsize=None)
def gather_rows(m: int, k: int) -> torch.Tensor:
    """Row selections (C(m,k), k) used to evaluate forms on vector tuples."""
    if k == 0:
        return torch.zeros((1, 0), dtype=torch.long)
    return torch.tensor(multi_indices(m, k), dtype=torch.long)


@lru_cache(maxsize=None)
def two_form_embedding(m: int) -> torch.Tensor:
    """E[r, c, K] so that the antisymmetric matrix of a 2-form is E @ a."""
    pairs = multi_indices(m, 2)
    table = np.zeros((m, m, len(pairs)))
    for pos, (r, c) in enumerate(pairs):
        table[r, c, pos] = 1.0
        table[c, r, pos] = -1.0
    return torch.tensor(table, dtype=DTYPE)


@lru_cache(maxsize=None)
def complex_structure_matrix(n: int) -> np.ndarray:
    """Block matrix J of I on tangent vectors: J e_{x_j} = e_{y_j}."""
    j = np.zeros((2 * n, 2 * n))
    for block in range(n):
        x, y = 2 * block, 2 * block + 1
        j[y, x] = 1.0
        j[x, y] = -1.0
    return j


@lru_cache(maxsize=None)
def complex_structure_tensor(n: int) -> torch.Tensor:
    return torch.tensor(complex_structure_matrix(n), dtype=DTYPE)


@lru_cache(maxsize=None)
def form_action_matrix(n: int, k: int) -> torch.Tensor:
    """M with (I a)_K = sum_I M[K, I] a_I, including the (-1)^k factor."""
    j = complex_structure_matrix(n)
    sign = -1.0 if k % 2 else 1.0
    return torch.tensor(sign * compound_matrix(j, k).T, dtype=DTYPE)
