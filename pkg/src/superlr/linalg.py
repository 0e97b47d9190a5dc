"""Dense linear algebra over F_p on numpy int64 arrays."""

from __future__ import annotations

import numpy as np


def modp(M, p: int) -> np.ndarray:
    return np.asarray(M, dtype=np.int64) % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the pivot columns."""
    R = modp(M, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            R[hit] = (R[hit] - np.outer(col[hit], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Rows spanning {v : M v = 0} over F_p."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, c in enumerate(piv):
            out[t, c] = (-R[i, f]) % p
    return out


def solve(M, b, p: int) -> np.ndarray | None:
    """One solution of M x = b (free variables set to zero), or None."""
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    n = M.shape[1]
    R, piv = rref(np.hstack([M, b]), p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def matpow(M, e: int, p: int) -> np.ndarray:
    M = modp(M, p)
    out = np.eye(M.shape[0], dtype=np.int64)
    base = M
    while e:
        if e & 1:
            out = out @ base % p
        base = base @ base % p
        e >>= 1
    return out


def row_space(rows, p: int) -> np.ndarray:
    """Echelon basis of the span of ``rows``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    R, piv = rref(rows, p)
    return R[: len(piv)]


def reduce_mod_rowspace(v, echelon: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Remainder of v after clearing the pivot columns of an rref basis."""
    v = modp(v, p).copy()
    for row, c in zip(echelon, pivots):
        if v[c]:
            v = (v - v[c] * row) % p
    return v
