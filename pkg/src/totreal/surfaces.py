"""Oriented simplicial m-surfaces in C^m carrying a density-weighted measure.

A surface is a finite list of m-simplices with an orientation sign and a
nonnegative density each.  The measure of a set is the density-weighted
m-volume of its intersection with the surface.
"""
from __future__ import annotations

import itertools
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels, _linalg, _simplex
from .config import DEFAULT_TOLERANCES
from .errors import (
    ConfigError,
    DegenerateSubspaceError,
    DimensionError,
    EvaluationError,
    ValidationError,
)
from .subspaces import RealSubspace

LEAF_ORDER = 4
MAX_REFINE_DEPTH = 10


@dataclass(frozen=True)
class TriangulatedSurface:
    vertices: np.ndarray
    simplices: np.ndarray
    signs: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        V = np.array(self.vertices, dtype=np.complex128)
        if V.ndim != 2 or V.shape[1] < 1:
            raise DimensionError(f"vertices must have shape (n, m), got {V.shape}")
        m = V.shape[1]
        T = np.array(self.simplices, dtype=np.int64).reshape(-1, m + 1)
        n_simp = T.shape[0]
        signs = np.ones(n_simp, dtype=np.int64) if self.signs is None else np.array(self.signs, dtype=np.int64)
        dens = np.ones(n_simp) if self.density is None else np.array(self.density, dtype=np.float64)
        if not np.all(np.isfinite(V)):
            raise ValidationError("vertex coordinates must be finite")
        if T.size and (T.min() < 0 or T.max() >= V.shape[0]):
            raise ValidationError("simplex refers to a vertex index out of range")
        if signs.shape != (n_simp,) or not np.all(np.abs(signs) == 1):
            raise ValidationError("need one orientation sign (+1 or -1) per simplex")
        if dens.shape != (n_simp,) or not np.all(np.isfinite(dens)) or np.any(dens < 0):
            raise ValidationError("need one finite nonnegative density per simplex")
        for name, arr in (("vertices", V), ("simplices", T), ("signs", signs), ("density", dens)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def ambient_m(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return self.simplices.shape[0]

    @cached_property
    def edge_matrices(self) -> np.ndarray:
        """``(S, m, m)`` complex; column k is ``v_{k+1} - v_0`` of each simplex."""
        P = self.vertices[self.simplices]
        return np.swapaxes(P[:, 1:, :] - P[:, :1, :], 1, 2)

    @cached_property
    def volumes(self) -> np.ndarray:
        return _simplex.simplex_volume(_linalg.realify(self.edge_matrices))

    @cached_property
    def centroids(self) -> np.ndarray:
        return self.vertices[self.simplices].mean(axis=1)

    @cached_property
    def form_values(self) -> np.ndarray:
        """Per-simplex ``sign * det(Z) / m!``: the restricted volume form integrated over each simplex."""
        return self.signs * np.linalg.det(self.edge_matrices) / math.factorial(self.ambient_m)

    @cached_property
    def _real_vertices(self) -> np.ndarray:
        P = self.vertices[self.simplices]
        return np.ascontiguousarray(np.concatenate([P.real, P.imag], axis=-1))

    @cached_property
    def masses(self) -> np.ndarray:
        return self.density * self.volumes

    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def check_simplices(self, rank_tol: float = DEFAULT_TOLERANCES.rank_tol):
        """Raise DegenerateSubspaceError naming the first degenerate simplex."""
        ratio = _linalg.singular_ratio(_linalg.realify(self.edge_matrices))
        bad = np.flatnonzero(ratio < rank_tol)
        if bad.size:
            raise DegenerateSubspaceError("edge vectors are rank deficient", simplex=int(bad[0]))

    def facet_orientations(self) -> dict:
        """Map each facet (sorted vertex tuple) to the induced orientations from its simplices."""
        facets = defaultdict(list)
        m = self.ambient_m
        for s, (simp, sign) in enumerate(zip(self.simplices.tolist(), self.signs.tolist())):
            for i in range(m + 1):
                rest = simp[:i] + simp[i + 1:]
                order = sorted(range(m), key=rest.__getitem__)
                facets[tuple(rest[j] for j in order)].append((s, sign * (-1) ** i * _parity(order)))
        return facets

    def orientation_report(self) -> dict:
        """Consistency of orientations across shared facets; problems are reported, never repaired."""
        inconsistent = []
        non_manifold = []
        boundary = 0
        for facet, uses in self.facet_orientations().items():
            if len(uses) == 1:
                boundary += 1
            elif len(uses) == 2:
                if uses[0][1] == uses[1][1]:
                    inconsistent.append([uses[0][0], uses[1][0]])
            else:
                non_manifold.append(list(facet))
        return {
            "consistent": not inconsistent,
            "manifold": not non_manifold,
            "boundary_facets": boundary,
            "inconsistent_pairs": inconsistent,
            "non_manifold_facets": non_manifold,
        }

    @cached_property
    def boundary_points(self) -> np.ndarray:
        """Vertices and centroids of the facets used by exactly one simplex."""
        pts = []
        for facet, uses in self.facet_orientations().items():
            if len(uses) == 1:
                corners = self.vertices[list(facet)]
                pts.append(corners)
                pts.append(corners.mean(axis=0, keepdims=True))
        if not pts:
            return np.empty((0, self.ambient_m), dtype=np.complex128)
        return np.unique(np.concatenate(pts), axis=0)

    def distance_to_boundary(self, x) -> float:
        B = self.boundary_points
        if not B.size:
            return math.inf
        return float(np.min(np.linalg.norm(B - np.asarray(x), axis=1)))

    def bounding_diameter(self) -> float:
        R = _linalg.realify(self.vertices.T).T
        return float(np.linalg.norm(R.max(axis=0) - R.min(axis=0)))

    def with_signs(self, signs) -> "TriangulatedSurface":
        return TriangulatedSurface(self.vertices, self.simplices, signs, self.density)

    def transformed(self, fn) -> "TriangulatedSurface":
        """Same combinatorics with vertices mapped through ``fn`` (applied to the (n, m) array)."""
        return TriangulatedSurface(fn(self.vertices), self.simplices, self.signs, self.density)


def _parity(order) -> int:
    sign = 1
    order = list(order)
    for i in range(len(order)):
        while order[i] != i:
            j = order[i]
            order[i], order[j] = order[j], order[i]
            sign = -sign
    return sign


@dataclass(frozen=True)
class BallQuery:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=np.complex128))
        if not self.radius > 0:
            raise ValidationError(f"ball radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))


def tangent_plane(M: TriangulatedSurface, simplex_id: int,
                  rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> RealSubspace:
    """Plane of the edge vectors ``v_k - v_0``, with orientation reversed for sign -1 simplices."""
    if not 0 <= simplex_id < len(M):
        raise ValidationError(f"simplex id {simplex_id} out of range")
    Z = M.edge_matrices[simplex_id].copy()
    if _linalg.singular_ratio(_linalg.realify(Z)) < rank_tol:
        raise DegenerateSubspaceError("edge vectors are rank deficient", simplex=simplex_id)
    if M.signs[simplex_id] < 0:
        Z[:, 0] = -Z[:, 0]
    return RealSubspace(Z.T, oriented=True)


def _orthonormal_tangents(M, rank_tol):
    M.check_simplices(rank_tol)
    Z = M.edge_matrices.copy()
    Z[M.signs < 0, :, 0] *= -1
    return _linalg.orthonormal_columns(Z)


def coefficient_field(M: TriangulatedSurface, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> np.ndarray:
    """Totally-real coefficient of every simplex's tangent plane; its minimum is the surface's lower bound."""
    Q = _orthonormal_tangents(M, rank_tol)
    return np.minimum(np.abs(np.linalg.det(Q)), 1.0)


def phase_field(M: TriangulatedSurface, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> np.ndarray:
    """Argument of the oriented orthonormal determinant per simplex (meaningful where the coefficient is positive)."""
    Q = _orthonormal_tangents(M, rank_tol)
    return np.angle(np.linalg.det(Q))


def lagrangian_defect_field(M: TriangulatedSurface, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> np.ndarray:
    """Per-simplex ``max |symplectic_form(b_j, b_k)|`` on orthonormalized tangent bases."""
    Q = _orthonormal_tangents(M, rank_tol)
    Omega = (np.swapaxes(Q.conj(), 1, 2) @ Q).imag
    return np.max(np.abs(Omega), axis=(1, 2))


def integrate_restricted_form(M: TriangulatedSurface, f=None, vectorized: bool = False) -> complex:
    """Centroid-rule integral of ``f`` against ``dz_1 ^ ... ^ dz_m`` restricted to M.

    ``f`` maps a point of C^m to a complex number (or, with ``vectorized``,
    an ``(S, m)`` array of points to ``S`` values); ``None`` means ``f = 1``.
    """
    terms = M.form_values
    if f is not None:
        terms = terms * _evaluate(f, M.centroids, vectorized)
    return complex(np.sum(terms))


def _evaluate(f, points, vectorized):
    if vectorized:
        vals = np.asarray(f(points), dtype=np.complex128).reshape(points.shape[0])
    else:
        vals = np.array([complex(f(p)) for p in points], dtype=np.complex128)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise EvaluationError("integrand is not finite", location=points[bad[0]].tolist())
    return vals


def measure_ball(M: TriangulatedSurface, q: BallQuery) -> float:
    """mu(B(center, radius)), by adaptive edgewise subdivision with order-4 lattice sampling at the leaves."""
    if q.center.shape != (M.ambient_m,):
        raise DimensionError(f"ball center must lie in C^{M.ambient_m}")
    if not len(M):
        return 0.0
    m = M.ambient_m
    center = np.ascontiguousarray(np.concatenate([q.center.real, q.center.imag]))
    return _kernels.ball_mass(
        M._real_vertices,
        np.ascontiguousarray(M.masses),
        center,
        q.radius,
        np.ascontiguousarray(_simplex.subdivision(m, 2)),
        np.ascontiguousarray(_simplex.lattice(m, LEAF_ORDER)),
        q.radius / 4.0,
        MAX_REFINE_DEPTH,
    )


def unit_ball_volume(m: int) -> float:
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def sample_centers(M: TriangulatedSurface, count: int, seed: int) -> np.ndarray:
    """``count`` simplex centroids chosen with probability proportional to mass."""
    if count < 1:
        raise ConfigError("need at least one center")
    p = M.masses / M.masses.sum()
    idx = np.random.default_rng(seed).choice(len(M), size=count, p=p)
    return M.centroids[idx]


def radius_sequence(r_min: float, r_max: float, count: int) -> np.ndarray:
    if not (0 < r_min <= r_max) or count < 1:
        raise ConfigError(f"bad radius sequence ({r_min}, {r_max}, {count})")
    return np.geomspace(r_min, r_max, count)


@dataclass
class AhlforsReport:
    c_lower: float
    c_upper: float
    boundary_lower: float | None
    boundary_upper: float | None
    n_interior: int
    n_boundary: int
    ratios: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "c_lower": _finite_or_none(self.c_lower),
            "c_upper": _finite_or_none(self.c_upper),
            "boundary_lower": self.boundary_lower,
            "boundary_upper": self.boundary_upper,
            "n_interior": self.n_interior,
            "n_boundary": self.n_boundary,
        }


@dataclass
class DoublingReport:
    max_ratio: float
    boundary_max_ratio: float | None
    n_used: int
    n_boundary: int
    n_excluded: int

    def to_json(self) -> dict:
        return {
            "max_ratio": _finite_or_none(self.max_ratio),
            "boundary_max_ratio": self.boundary_max_ratio,
            "n_used": self.n_used,
            "n_boundary": self.n_boundary,
            "n_excluded": self.n_excluded,
        }


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


def _check_sampling(M, centers, radii, factor=1.0):
    centers = np.asarray(centers, dtype=np.complex128).reshape(-1, M.ambient_m)
    radii = np.atleast_1d(np.asarray(radii, dtype=np.float64))
    if centers.shape[0] == 0 or radii.size == 0:
        raise ConfigError("empty center or radius sample")
    diam = M.bounding_diameter()
    if np.any(radii <= 0) or np.any(factor * radii > diam * (1 + 1e-12)):
        raise ConfigError(f"radii must lie in (0, {diam:.6g}] (after scaling by {factor})")
    return centers, radii


def ahlfors_report(M: TriangulatedSurface, centers, radii) -> AhlforsReport:
    """Extremes of ``mu(B(x, r)) / r^m`` over the sample grid.

    Samples whose ball reaches the boundary of M are tallied separately:
    truncated balls bias the lower bound.
    """
    centers, radii = _check_sampling(M, centers, radii)
    m = M.ambient_m
    interior, boundary, rows = [], [], []
    for x in centers:
        dist = M.distance_to_boundary(x)
        for r in radii:
            ratio = measure_ball(M, BallQuery(x, r)) / r**m
            truncated = dist < r
            (boundary if truncated else interior).append(ratio)
            rows.append((x, float(r), ratio, truncated))
    return AhlforsReport(
        c_lower=min(interior, default=math.nan),
        c_upper=max(interior, default=math.nan),
        boundary_lower=min(boundary) if boundary else None,
        boundary_upper=max(boundary) if boundary else None,
        n_interior=len(interior),
        n_boundary=len(boundary),
        ratios=rows,
    )


def doubling_report(M: TriangulatedSurface, centers, radii) -> DoublingReport:
    """Largest ``mu(B(x, 2r)) / mu(B(x, r))``; centers off the support are excluded."""
    centers, radii = _check_sampling(M, centers, radii, factor=2.0)
    used, boundary = [], []
    excluded = 0
    for x in centers:
        dist = M.distance_to_boundary(x)
        for r in radii:
            small = measure_ball(M, BallQuery(x, r))
            if small <= 0.0:
                excluded += 1
                continue
            ratio = measure_ball(M, BallQuery(x, 2 * r)) / small
            (boundary if dist < 2 * r else used).append(ratio)
    return DoublingReport(
        max_ratio=max(used, default=math.nan),
        boundary_max_ratio=max(boundary) if boundary else None,
        n_used=len(used),
        n_boundary=len(boundary),
        n_excluded=excluded,
    )


# construction helpers

def kuhn_grid(m: int, n, lo=0.0, hi=1.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Kuhn triangulation of an axis-aligned box in R^m.

    Returns ``(points, simplices, signs)``; each of the ``prod(n)`` cells is
    cut into m! simplices and the signs make every simplex positively
    oriented with respect to R^m.
    """
    n = np.broadcast_to(np.asarray(n, dtype=np.int64), (m,))
    if np.any(n < 1):
        raise ConfigError("grid resolution must be >= 1 per axis")
    lo = np.broadcast_to(np.asarray(lo, dtype=np.float64), (m,))
    hi = np.broadcast_to(np.asarray(hi, dtype=np.float64), (m,))
    axes = [np.linspace(lo[j], hi[j], n[j] + 1) for j in range(m)]
    points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m)
    strides = np.array([int(np.prod(n[j + 1:] + 1)) for j in range(m)])
    corners = np.stack(np.meshgrid(*[np.arange(k) for k in n], indexing="ij"), axis=-1).reshape(-1, m)
    base = corners @ strides
    simplices, signs = [], []
    for perm in itertools.permutations(range(m)):
        offsets = np.concatenate([[0], np.cumsum(strides[list(perm)])])
        simplices.append(base[:, None] + offsets[None, :])
        signs.append(np.full(base.shape[0], _parity(perm)))
    return points, np.concatenate(simplices), np.concatenate(signs)


def flat_patch(m: int, n, lo=0.0, hi=1.0, density=1.0) -> TriangulatedSurface:
    """Kuhn-triangulated box of R^m inside C^m."""
    points, simplices, signs = kuhn_grid(m, n, lo, hi)
    dens = np.full(simplices.shape[0], float(density))
    return TriangulatedSurface(points.astype(np.complex128), simplices, signs, dens)


def polygon_curve(nodes) -> TriangulatedSurface:
    """Closed polygon through ``nodes`` as a 1-surface in C (edges k -> k+1)."""
    nodes = np.asarray(nodes, dtype=np.complex128).reshape(-1, 1)
    N = nodes.shape[0]
    simp = np.stack([np.arange(N), (np.arange(N) + 1) % N], axis=1)
    return TriangulatedSurface(nodes, simp)


def union(*surfaces: TriangulatedSurface) -> TriangulatedSurface:
    """Disjoint union; vertex lists are concatenated, nothing is merged."""
    m = {S.ambient_m for S in surfaces}
    if len(m) != 1:
        raise DimensionError("cannot join surfaces of different ambient dimension")
    offsets = np.cumsum([0] + [S.vertices.shape[0] for S in surfaces[:-1]])
    return TriangulatedSurface(
        np.concatenate([S.vertices for S in surfaces]),
        np.concatenate([S.simplices + off for S, off in zip(surfaces, offsets)]),
        np.concatenate([S.signs for S in surfaces]),
        np.concatenate([S.density for S in surfaces]),
    )


def refine(M: TriangulatedSurface) -> TriangulatedSurface:
    """Uniform edgewise subdivision: each simplex becomes 2^m children with its orientation."""
    m = M.ambient_m
    table = _simplex.subdivision(m, 2)
    child_signs = np.sign(np.linalg.det(table[:, 1:, 1:] - table[:, :1, 1:])).astype(np.int64)
    index: dict = {}
    new_vertices = []
    simplices, signs, dens = [], [], []
    for simp, sign, rho in zip(M.simplices.tolist(), M.signs.tolist(), M.density.tolist()):
        for child, csign in zip(table, child_signs):
            ids = []
            for bary in child:
                key = tuple(sorted((simp[j], int(round(2 * w))) for j, w in enumerate(bary) if w > 0))
                if key not in index:
                    index[key] = len(new_vertices)
                    new_vertices.append(bary @ M.vertices[simp])
                ids.append(index[key])
            simplices.append(ids)
            signs.append(sign * csign)
            dens.append(rho)
    return TriangulatedSurface(np.array(new_vertices), simplices, signs, dens)


# trmesh text format

def to_trmesh(M: TriangulatedSurface) -> str:
    """Canonical text form: header, one line of 2m floats per vertex, then simplex lines."""
    lines = [f"trmesh {M.ambient_m} {M.vertices.shape[0]} {len(M)}"]
    for v in M.vertices:
        lines.append(" ".join(f"{x!r} {y!r}" for x, y in zip(v.real.tolist(), v.imag.tolist())))
    for simp, sign, rho in zip(M.simplices.tolist(), M.signs.tolist(), M.density.tolist()):
        lines.append(" ".join(map(str, simp)) + f" {sign:+d} {rho!r}")
    return "\n".join(lines) + "\n"


def read_trmesh(text: str) -> TriangulatedSurface:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0][0] != "trmesh" or len(rows[0]) != 4:
        raise ValidationError("missing 'trmesh <ambient_m> <num_vertices> <num_simplices>' header")
    try:
        m, nv, ns = (int(x) for x in rows[0][1:])
        if m < 1 or nv < 0 or ns < 0 or len(rows) != 1 + nv + ns:
            raise ValueError(f"expected {1 + nv + ns} non-empty lines, found {len(rows)}")
        coords = np.array([[float(x) for x in r] for r in rows[1:1 + nv]], dtype=np.float64).reshape(nv, -1)
        if coords.shape[1] != 2 * m:
            raise ValueError(f"vertex lines need {2 * m} floats")
        simp_rows = rows[1 + nv:]
        if any(len(r) != m + 3 for r in simp_rows):
            raise ValueError(f"simplex lines need {m + 1} indices, a sign and a density")
        simplices = [[int(x) for x in r[:m + 1]] for r in simp_rows]
        signs = [int(float(r[m + 1])) for r in simp_rows]
        dens = [float(r[m + 2]) for r in simp_rows]
    except ValueError as exc:
        raise ValidationError(f"malformed trmesh: {exc}") from exc
    vertices = coords[:, 0::2] + 1j * coords[:, 1::2]
    M = TriangulatedSurface(vertices, np.array(simplices, dtype=np.int64).reshape(ns, m + 1), signs, dens)
    report = M.orientation_report()
    if not (report["consistent"] and report["manifold"]):
        warnings.warn("mesh orientation is inconsistent or non-manifold; integrals use per-simplex signs")
    return M
