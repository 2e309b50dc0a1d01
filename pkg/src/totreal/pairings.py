"""Hermitian, real and symplectic pairings on C^m.

Convention: ``hermitian_inner(v, w) = sum_j v_j * conj(w_j)``, linear in the
first slot.  The symplectic form is its imaginary part, so for the
nondegeneracy witness ``w = i v`` one gets ``symplectic_form(v, i v) = -|v|^2``.
"""
from __future__ import annotations

import cmath

import numpy as np

from .errors import DimensionError, ValidationError


def _as_vector(v) -> np.ndarray:
    arr = v if type(v) is np.ndarray and v.dtype == np.complex128 else np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"expected a 1-d vector with m >= 1 entries, got shape {arr.shape}")
    return arr


def _check_finite(arr):
    if not np.all(np.isfinite(arr)):
        raise ValidationError("vector entries must be finite")


def as_complex_vector(v) -> np.ndarray:
    """Validate ``v`` as a point of C^m and return it as a complex array."""
    arr = _as_vector(v)
    _check_finite(arr)
    return arr


def hermitian_inner(v, w) -> complex:
    v, w = _as_vector(v), _as_vector(w)
    if v.shape != w.shape:
        raise DimensionError(f"dimension mismatch: {v.shape[0]} vs {w.shape[0]}")
    # vdot conjugates its first argument
    out = complex(np.vdot(w, v))
    # a nan or inf entry always poisons the sum, so only a nonfinite result needs the full scan
    if not cmath.isfinite(out):
        _check_finite(v)
        _check_finite(w)
    return out


def real_inner(v, w) -> float:
    """Real part of the Hermitian product: the Euclidean inner product on R^{2m}."""
    return hermitian_inner(v, w).real


def symplectic_form(v, w) -> float:
    return hermitian_inner(v, w).imag


def gram_matrices(vectors) -> tuple[np.ndarray, np.ndarray]:
    """Real Gram matrix and symplectic matrix of a list of vectors.

    Entry ``[j, k]`` of the pair is ``real_inner(b_j, b_k)`` and
    ``symplectic_form(b_j, b_k)``.
    """
    B = np.asarray(vectors, dtype=np.complex128)
    H = B @ B.conj().T
    return H.real, H.imag
