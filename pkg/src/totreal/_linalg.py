"""Batched real/complex helpers shared by the subspace and surface code.

All functions take stacks of matrices with the basis vectors as *columns*:
a complex array of shape ``(..., m, k)`` or its real form ``(..., 2m, k)``.
"""
from __future__ import annotations

import numpy as np


def realify(Z: np.ndarray) -> np.ndarray:
    """Stack real parts over imaginary parts: C^m columns -> R^{2m} columns."""
    return np.concatenate([Z.real, Z.imag], axis=-2)


def complexify(A: np.ndarray) -> np.ndarray:
    m = A.shape[-2] // 2
    return A[..., :m, :] + 1j * A[..., m:, :]


def singular_ratio(A: np.ndarray) -> np.ndarray:
    """Smallest over largest singular value, 0 for an all-zero matrix."""
    s = np.linalg.svd(A, compute_uv=False)
    top = s[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(top > 0, s[..., -1] / np.where(top > 0, top, 1.0), 0.0)
    return ratio


def mgs(A: np.ndarray, passes: int = 2) -> np.ndarray:
    """Modified Gram-Schmidt on the columns, with one re-orthogonalization pass.

    The result has the same column span and a positive-diagonal triangular
    change of basis, so the orientation of the column order is preserved.
    Callers are responsible for rejecting rank-deficient input first.
    """
    Q = np.array(A, dtype=np.float64, copy=True)
    k = Q.shape[-1]
    for j in range(k):
        for _ in range(passes):
            for i in range(j):
                proj = np.sum(Q[..., :, i] * Q[..., :, j], axis=-1)
                Q[..., :, j] -= proj[..., None] * Q[..., :, i]
        norm = np.sqrt(np.sum(Q[..., :, j] ** 2, axis=-1))
        Q[..., :, j] /= norm[..., None]
    return Q


def orthonormal_columns(Z: np.ndarray) -> np.ndarray:
    """Complex column matrix whose columns are a real-orthonormal basis of the same span."""
    return complexify(mgs(realify(Z)))


def transversal_rank(Z: np.ndarray, rank_tol: float) -> np.ndarray:
    """Real rank of ``[B | iB]``; equals 2m exactly when the span is totally real."""
    A = realify(np.concatenate([Z, 1j * Z], axis=-1))
    s = np.linalg.svd(A, compute_uv=False)
    return np.sum(s > rank_tol * s[..., :1], axis=-1)
