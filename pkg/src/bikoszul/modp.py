"""Dense row reduction over GF(p) on int64 numpy arrays.

Entries stay in [0, p); with p < 2**31 every product fits in int64.
Pivots are taken at the first nonzero position so results are reproducible.
"""
from __future__ import annotations

import numba
import numpy as np


def as_matrix(rows, ncols: int, p: int) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), ncols) % p


_EXACT = float(2 ** 53)


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` for entries in [0, p), through float64 BLAS when exact."""
    inner = A.shape[1]
    if inner and inner * (p - 1) ** 2 < _EXACT:
        C = A.astype(np.float64) @ B.astype(np.float64)
        return np.fmod(C, p).astype(np.int64)
    return A @ B % p


@numba.njit(cache=True)
def _rref_inplace(A, p):
    nrows, ncols = A.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    support = np.empty(ncols, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = -1
        for i in range(r, nrows):
            if A[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, ncols):
                t = A[r, j]
                A[r, j] = A[k, j]
                A[k, j] = t
        # inverse of the pivot by Fermat
        inv, base, e = 1, A[r, c], p - 2
        while e:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        s = 0
        for j in range(c, ncols):
            if A[r, j] != 0:
                A[r, j] = A[r, j] * inv % p
                support[s] = j
                s += 1
        for i in range(nrows):
            f = A[i, c]
            if i != r and f != 0:
                for t in range(s):
                    j = support[t]
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def rref(A: np.ndarray, p: int):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = np.array(A, dtype=np.int64) % p
    if A.size == 0:
        return A[:0], []
    r, piv = _rref_inplace(A, p)
    return A[:r], [int(c) for c in piv]


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def reduce_rows(V: np.ndarray, basis: np.ndarray, pivots, p: int) -> np.ndarray:
    """Reduce the rows of ``V`` modulo the row space of an rref ``basis``."""
    if basis.shape[0] == 0 or V.shape[0] == 0:
        return V % p
    coeff = V[:, pivots] % p
    return (V - matmul_mod(coeff, basis, p)) % p


def left_kernel(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : x A = 0}, one row per non-pivot row of ``A``.

    Computed from the rref of the transpose: each free coordinate f gives
    the vector with x_f = 1 and the pivot coordinates solved for.
    """
    nrows, ncols = A.shape
    if nrows == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if ncols == 0:
        return np.eye(nrows, dtype=np.int64)
    R, piv = rref(A.T, p)
    free = np.setdiff1d(np.arange(nrows), piv)
    K = np.zeros((free.size, nrows), dtype=np.int64)
    if free.size:
        K[np.arange(free.size), free] = 1
        if piv:
            K[:, piv] = (-R[:, free].T) % p
    return K


def complement_rows(V: np.ndarray, span: np.ndarray, p: int):
    """Indices of rows of ``V`` extending ``span`` to a basis of span + rowspace(V).

    Rows are scanned in order; a row is chosen when it is independent of the
    span and the rows chosen before it.
    """
    if V.shape[0] == 0:
        return []
    ncols = V.shape[1]
    basis, piv = rref(span, p) if span.shape[0] else (np.zeros((0, ncols), dtype=np.int64), [])
    R = reduce_rows(V % p, basis, piv, p)
    # pivot columns of the transpose are the greedily independent rows
    return [int(c) for c in rref(R.T, p)[1]]
