"""Dense linear algebra over the prime field F_p on integer numpy arrays."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput


def as_fp(matrix, p: int) -> np.ndarray:
    arr = np.array(matrix, dtype=np.int64)
    if arr.ndim != 2:
        raise InvalidInput("expected a 2-d matrix")
    return arr % p


def rank_mod_p(matrix, p: int) -> int:
    """Rank by Gaussian elimination with modular inverses."""
    a = as_fp(matrix, p).copy()
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(a[rank:, col])[0]
        if len(pivots) == 0:
            continue
        piv = rank + pivots[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, col]), -1, p)) % p
        others = np.nonzero(a[:, col])[0]
        for r in others:
            if r != rank:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
    return rank


def matmul_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def matpow_mod_p(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a % p
    while k:
        if k & 1:
            result = matmul_mod_p(result, base, p)
        base = matmul_mod_p(base, base, p)
        k >>= 1
    return result
