"""Real m-planes in C^m and their totally-real / Lagrangian classification.

A plane is stored through a spanning basis.  The central quantity is the
*totally-real coefficient*: ``|det Z|`` where the columns of ``Z`` are a
real-orthonormal basis of the plane.  It measures how far the restriction of
``dz_1 ^ ... ^ dz_m`` is from vanishing on the plane; it lies in ``[0, 1]``,
is 0 exactly when the plane contains a complex line, and is 1 exactly on
Lagrangian planes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _linalg
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import (
    DegenerateSubspaceError,
    DimensionError,
    NotUnitaryError,
    PhaseUndefinedError,
    UnorientedError,
    ValidationError,
)

MAX_RANDOM_ATTEMPTS = 16


@dataclass(frozen=True)
class RealSubspace:
    """A real m-dimensional subspace of C^m.

    ``basis[k]`` is the k-th spanning vector.  When ``oriented`` is true the
    listed order fixes the orientation.
    """

    basis: np.ndarray
    oriented: bool = True

    def __post_init__(self):
        B = np.array(self.basis, dtype=np.complex128)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 1:
            raise DimensionError(
                f"need m basis vectors of length m, got array of shape {B.shape}"
            )
        if not np.all(np.isfinite(B)):
            raise ValidationError("basis entries must be finite")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "oriented", bool(self.oriented))

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    def times_i(self) -> "RealSubspace":
        return RealSubspace(1j * self.basis, self.oriented)

    def apply(self, U) -> "RealSubspace":
        """Image of the plane under a complex-linear map."""
        U = np.asarray(U, dtype=np.complex128)
        return RealSubspace((U @ self.basis.T).T, self.oriented)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "basis": [[[float(z.real), float(z.imag)] for z in vec] for vec in self.basis],
            "oriented": self.oriented,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RealSubspace":
        try:
            m = int(data["m"])
            raw = np.asarray(data["basis"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed plane JSON: {exc}") from exc
        if raw.shape != (m, m, 2):
            raise DimensionError(f"basis must have shape ({m}, {m}, 2), got {raw.shape}")
        return cls(raw[..., 0] + 1j * raw[..., 1], bool(data.get("oriented", True)))


@dataclass(frozen=True)
class ClassificationReport:
    m: int
    coefficient: float
    phase: float | None
    totally_real: bool
    lagrangian: bool
    special_lagrangian: bool | None
    lagrangian_defect: float
    tolerances: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "coefficient": self.coefficient,
            "phase": self.phase,
            "totally_real": self.totally_real,
            "lagrangian": self.lagrangian,
            "special_lagrangian": self.special_lagrangian,
            "lagrangian_defect": self.lagrangian_defect,
            "tolerances": dict(self.tolerances),
        }


def _check_rank(Z: np.ndarray, rank_tol: float):
    if _linalg.singular_ratio(_linalg.realify(Z)) < rank_tol:
        raise DegenerateSubspaceError("basis is numerically rank deficient over R")


def complex_matrix(L: RealSubspace) -> np.ndarray:
    """m x m complex matrix whose k-th column is the k-th basis vector."""
    return L.basis.T.copy()


def orthonormalize(L: RealSubspace, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> RealSubspace:
    Z = complex_matrix(L)
    _check_rank(Z, rank_tol)
    return RealSubspace(_linalg.orthonormal_columns(Z).T, L.oriented)


def _orthonormal_matrix(L, rank_tol):
    return complex_matrix(orthonormalize(L, rank_tol))


def totally_real_coefficient(L: RealSubspace, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> float:
    Z = _orthonormal_matrix(L, rank_tol)
    return float(min(abs(np.linalg.det(Z)), 1.0))


def raw_coefficient(L: RealSubspace) -> float:
    """``|det Z| / sqrt(det G)`` on the unnormalized basis, with G the real Gram matrix.

    Mathematically equal to :func:`totally_real_coefficient`; kept as an
    independent cross-check that skips orthonormalization.
    """
    Z = complex_matrix(L)
    G = (Z.conj().T @ Z).real
    return float(abs(np.linalg.det(Z)) / math.sqrt(np.linalg.det(G)))


def lagrangian_defect(L: RealSubspace, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> float:
    """Largest ``|symplectic_form(b_j, b_k)|`` over an orthonormalized basis."""
    Z = _orthonormal_matrix(L, rank_tol)
    return float(np.max(np.abs((Z.conj().T @ Z).imag)))


def is_totally_real(L: RealSubspace, tol: float = DEFAULT_TOLERANCES.coefficient_tol,
                    rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> bool:
    _positive(tol)
    return totally_real_coefficient(L, rank_tol) > tol


def is_transverse(L: RealSubspace, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> bool:
    """Transversality of L and iL read off the real rank of ``[B | iB]``."""
    return int(_linalg.transversal_rank(complex_matrix(L), rank_tol)) == 2 * L.m


def is_lagrangian(L: RealSubspace, tol: float = DEFAULT_TOLERANCES.lagrangian_tol,
                  rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> bool:
    _positive(tol)
    return lagrangian_defect(L, rank_tol) <= tol


def _oriented_det(L: RealSubspace, rank_tol: float) -> complex:
    if not L.oriented:
        raise UnorientedError("this query needs an oriented plane")
    return complex(np.linalg.det(_orthonormal_matrix(L, rank_tol)))


def is_special_lagrangian(L: RealSubspace, tol: float = DEFAULT_TOLERANCES.lagrangian_tol,
                          rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> bool:
    _positive(tol)
    det = _oriented_det(L, rank_tol)
    return is_lagrangian(L, tol, rank_tol) and abs(det - 1.0) <= tol


def lagrangian_phase(L: RealSubspace, phase_tol: float = DEFAULT_TOLERANCES.phase_tol,
                     rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> float:
    """Principal argument in (-pi, pi] of the oriented orthonormal determinant."""
    det = _oriented_det(L, rank_tol)
    if abs(det) <= phase_tol:
        raise PhaseUndefinedError(f"coefficient {abs(det):.3e} is below phase_tol; phase undefined")
    return principal_angle(math.atan2(det.imag, det.real))


def principal_angle(theta: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    theta = math.remainder(theta, 2 * math.pi)
    return math.pi if theta == -math.pi else theta


def lagrangian_from_unitary(U, unitary_tol: float = DEFAULT_TOLERANCES.unitary_tol) -> RealSubspace:
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {U.shape}")
    err = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if err > unitary_tol:
        raise NotUnitaryError(f"max |U^H U - I| = {err:.3e} exceeds {unitary_tol:.1e}")
    return RealSubspace(U.T, oriented=True)


def random_subspace(m: int, seed: int, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> RealSubspace:
    """Plane spanned by m i.i.d. standard complex Gaussian vectors."""
    if m < 1:
        raise DimensionError("m must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RANDOM_ATTEMPTS):
        Z = _complex_gaussian(rng, (m, m))
        if _linalg.singular_ratio(_linalg.realify(Z)) >= rank_tol:
            return RealSubspace(Z.T, oriented=True)
    raise DegenerateSubspaceError(f"no valid basis after {MAX_RANDOM_ATTEMPTS} attempts")


def random_unitary(m: int, rng: np.random.Generator, special: bool = False) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Ginibre matrix."""
    for _ in range(MAX_RANDOM_ATTEMPTS):
        Z = _complex_gaussian(rng, (m, m))
        Q, R = np.linalg.qr(Z)
        d = np.diag(R)
        if np.min(np.abs(d)) > 1e-12:
            break
    else:
        raise DegenerateSubspaceError(f"no full-rank sample after {MAX_RANDOM_ATTEMPTS} attempts")
    Q = Q * (d / np.abs(d))
    if special:
        Q[:, 0] *= np.conj(np.linalg.det(Q))
    return Q


def random_lagrangian(m: int, seed: int, special: bool = False) -> RealSubspace:
    if m < 1:
        raise DimensionError("m must be >= 1")
    rng = np.random.default_rng(seed)
    return RealSubspace(random_unitary(m, rng, special).T, oriented=True)


def classify(L: RealSubspace, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> ClassificationReport:
    t = tolerances
    coefficient = totally_real_coefficient(L, t.rank_tol)
    defect = lagrangian_defect(L, t.rank_tol)
    totally_real = coefficient > t.coefficient_tol
    lagrangian = defect <= t.lagrangian_tol
    phase = special = None
    if L.oriented:
        det = _oriented_det(L, t.rank_tol)
        if abs(det) > t.phase_tol:
            phase = principal_angle(math.atan2(det.imag, det.real))
        special = lagrangian and abs(det - 1.0) <= t.lagrangian_tol
    return ClassificationReport(
        m=L.m,
        coefficient=coefficient,
        phase=phase,
        totally_real=totally_real,
        lagrangian=lagrangian,
        special_lagrangian=special,
        lagrangian_defect=defect,
        tolerances=t.as_dict(),
    )


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _positive(tol):
    if not tol > 0:
        raise ValidationError(f"tolerance must be positive, got {tol!r}")
