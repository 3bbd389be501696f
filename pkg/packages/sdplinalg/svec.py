"""Isometric vectorization of symmetric matrices and the symmetrized Kronecker product.

svec ordering is fixed: lower triangle, column by column, off-diagonal entries
scaled by sqrt(2). For a 3x3 matrix the slots are
(X11, r2*X21, r2*X31, X22, r2*X32, X33). Fixture and message files depend on it.
"""

import math
from functools import lru_cache

import numpy as np

SYMMETRY_TOLERANCE = 1e-12


class LinalgError(Exception):
    """Raised when a linear-algebra kernel receives invalid input."""


def svec_dim(n: int) -> int:
    """Length of svec for an n x n symmetric matrix."""
    return n * (n + 1) // 2


@lru_cache(maxsize=64)
def _lower_indices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # triu_indices walks rows of the upper triangle; swapping the roles gives
    # the lower triangle walked column by column.
    cols, rows = np.triu_indices(n)
    scale = np.where(rows == cols, 1.0, math.sqrt(2.0))
    for arr in (rows, cols, scale):
        arr.setflags(write=False)
    return rows, cols, scale


@lru_cache(maxsize=64)
def _svec_matrix(n: int) -> np.ndarray:
    """Matrix U with svec(X) = U vec(X) for symmetric X (vec is column-major)."""
    rows, cols, _ = _lower_indices(n)
    u = np.zeros((svec_dim(n), n * n))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for k, (i, j) in enumerate(zip(rows, cols)):
        if i == j:
            u[k, i + j * n] = 1.0
        else:
            u[k, i + j * n] = inv_sqrt2
            u[k, j + i * n] = inv_sqrt2
    u.setflags(write=False)
    return u


def svec(x: np.ndarray) -> np.ndarray:
    """
    Vectorize a symmetric matrix.

    Args:
        x: Symmetric n x n matrix; symmetrized before packing

    Returns:
        Vector of length n(n+1)/2

    Raises:
        LinalgError: If x is not square or is asymmetric beyond tolerance
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise LinalgError(f"svec expects a square matrix, got shape {x.shape}")
    scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
    if np.max(np.abs(x - x.T), initial=0.0) > SYMMETRY_TOLERANCE * scale:
        raise LinalgError("svec expects a symmetric matrix")
    x = 0.5 * (x + x.T)
    rows, cols, factor = _lower_indices(x.shape[0])
    return x[rows, cols] * factor


def smat(v: np.ndarray) -> np.ndarray:
    """Inverse of svec."""
    v = np.asarray(v, dtype=float)
    n = int(round((math.sqrt(8 * v.size + 1) - 1) / 2))
    if svec_dim(n) != v.size:
        raise LinalgError(f"length {v.size} is not a triangular number")
    rows, cols, factor = _lower_indices(n)
    x = np.zeros((n, n))
    x[rows, cols] = v / factor
    x[cols, rows] = v / factor
    return x


def skron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Symmetrized Kronecker product as an operator on svec coordinates.

    skron(A, B) @ svec(S) == svec((A S B^T + B S A^T) / 2) for symmetric S.

    Raises:
        LinalgError: If the matrices are not square of equal order
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise LinalgError(f"skron order mismatch: {a.shape} vs {b.shape}")
    u = _svec_matrix(a.shape[0])
    kron = 0.5 * (np.kron(a, b) + np.kron(b, a))
    return u @ kron @ u.T


def h_op(d: np.ndarray, m: np.ndarray) -> np.ndarray:
    """
    Symmetrization operator H_D(M) = (D M D^-1 + D^-T M^T D^T) / 2.

    The second term is the transpose of the first, so the result is symmetric.

    Raises:
        LinalgError: If d is singular
    """
    d = np.asarray(d, dtype=float)
    m = np.asarray(m, dtype=float)
    try:
        d_inv = np.linalg.inv(d)
    except np.linalg.LinAlgError as e:
        raise LinalgError("h_op: D is singular") from e
    if not np.all(np.isfinite(d_inv)) or np.linalg.cond(d) > 1.0 / np.finfo(float).eps:
        raise LinalgError("h_op: D is singular")
    first = d @ m @ d_inv
    return 0.5 * (first + first.T)
