"""Probabilists' Hermite tensor basis bookkeeping.

Multi-indices enumerate all alpha in N^m with |alpha| <= degree, ordered by
(total degree, lexicographic), so coefficient layouts are canonical. Value
tables come from the backend kernels (three-term recurrence
He_{k+1}(x) = x He_k(x) - k He_{k-1}(x)).
"""

from __future__ import annotations

import math

import numpy as np


def n_basis(m: int, degree: int) -> int:
    return math.comb(m + degree, degree)


def multi_indices(m: int, degree: int) -> np.ndarray:
    """All multi-indices of total degree <= degree, shape (NB, m) int64."""
    if m < 1 or degree < 0:
        raise ValueError("multi_indices: need m >= 1, degree >= 0")

    def rec(dims, budget):
        if dims == 1:
            for k in range(budget + 1):
                yield (k,)
            return
        for k in range(budget + 1):
            for rest in rec(dims - 1, budget - k):
                yield (k,) + rest

    idx = sorted(rec(m, degree), key=lambda a: (sum(a), a))
    out = np.array(idx, dtype=np.int64).reshape(len(idx), m)
    assert out.shape[0] == n_basis(m, degree)
    return out


def default_degree(m: int) -> int:
    """Degree cap keeping the tensor basis size workable as m grows."""
    if m <= 4:
        return 6
    if m <= 6:
        return 4
    if m <= 12:
        return 3
    return 2


def hermite_value(k: int, x: float) -> float:
    """Scalar He_k(x), recurrence form (test oracle convenience)."""
    hm, h = 0.0, 1.0
    for j in range(k):
        hm, h = h, x * h - j * hm
    return h
