"""Cauchy integrals over closed curves in C.

Transforms use the periodic trapezoid rule on a uniformly parameterized
curve, which converges geometrically for analytic data as long as the target
stays a few node spacings away from the curve.  Boundary values are reached
through two-sided limits with Richardson extrapolation instead of a
principal-value rule.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    ConfigError,
    LoopCrossesCurveError,
    NonIntegerResidualError,
    TooCloseToCurveError,
    ValidationError,
)
from .surfaces import TriangulatedSurface, polygon_curve

MIN_NODES = 8
EXCLUSION_SPACINGS = 4.0


@dataclass(frozen=True)
class ClosedCurve:
    """Nodes ``zeta(t_k)`` at ``t_k = 2 pi k / N`` with derivative samples ``zeta'(t_k)``."""

    nodes: np.ndarray
    derivatives: np.ndarray | None = None
    orientation: int = 1

    def __post_init__(self):
        z = np.array(self.nodes, dtype=np.complex128).ravel()
        if z.size < MIN_NODES:
            raise ValidationError(f"need at least {MIN_NODES} nodes, got {z.size}")
        if not np.all(np.isfinite(z)):
            raise ValidationError("curve nodes must be finite")
        if self.orientation not in (1, -1):
            raise ValidationError("orientation must be +1 or -1")
        gaps = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(gaps, np.inf)
        if not np.min(gaps) > 0:
            raise ValidationError("curve nodes must be distinct")
        if self.derivatives is None:
            dz = spectral_derivative(z)
        else:
            dz = np.array(self.derivatives, dtype=np.complex128).ravel()
            if dz.shape != z.shape or not np.all(np.isfinite(dz)):
                raise ValidationError("need one finite derivative sample per node")
        z.setflags(write=False)
        dz.setflags(write=False)
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "derivatives", dz)

    @property
    def N(self) -> int:
        return self.nodes.size

    @property
    def exclusion_radius(self) -> float:
        return EXCLUSION_SPACINGS * (2 * math.pi / self.N) * float(np.max(np.abs(self.derivatives)))

    def reversed(self) -> "ClosedCurve":
        return ClosedCurve(self.nodes, self.derivatives, -self.orientation)

    def normals(self) -> np.ndarray:
        """Unit normals pointing to the right of the direction of travel."""
        d = self.derivatives
        return -1j * self.orientation * d / np.abs(d)

    def samples(self, f) -> np.ndarray:
        """Boundary samples from an array, a scalar, or a callable evaluated at the nodes."""
        if callable(f):
            vals = np.asarray(f(self.nodes), dtype=np.complex128)
        else:
            vals = np.asarray(f, dtype=np.complex128)
        vals = np.broadcast_to(vals, self.nodes.shape)
        if not np.all(np.isfinite(vals)):
            raise ValidationError("boundary samples must be finite")
        return vals

    def distance(self, z) -> np.ndarray:
        """Distance from each target to the polygon through the nodes."""
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        a = self.nodes
        b = np.roll(a, -1)
        e = b - a
        t = np.clip(((z[:, None] - a[None, :]) * e.conj()).real / np.abs(e) ** 2, 0.0, 1.0)
        return np.min(np.abs(z[:, None] - (a + t * e)[None, :]), axis=1)

    def to_surface(self) -> TriangulatedSurface:
        nodes = self.nodes if self.orientation > 0 else self.nodes[::-1]
        return polygon_curve(nodes)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "nodes": [[float(z.real), float(z.imag)] for z in self.nodes],
            "derivatives": [[float(z.real), float(z.imag)] for z in self.derivatives],
            "orientation": self.orientation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClosedCurve":
        try:
            nodes = np.asarray(data["nodes"], dtype=np.float64)
            derivs = data.get("derivatives")
            if derivs is not None:
                derivs = np.asarray(derivs, dtype=np.float64)
                derivs = derivs[:, 0] + 1j * derivs[:, 1]
            if "N" in data and int(data["N"]) != nodes.shape[0]:
                raise ValueError("N does not match the number of nodes")
            return cls(nodes[:, 0] + 1j * nodes[:, 1], derivs, int(data.get("orientation", 1)))
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed curve JSON: {exc}") from exc


def spectral_derivative(nodes: np.ndarray) -> np.ndarray:
    """d/dt of a periodic sample ``nodes[k] = zeta(2 pi k / N)`` by FFT."""
    N = nodes.size
    k = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        k[N // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(nodes))


def circle(N: int, radius: float = 1.0, center: complex = 0.0) -> ClosedCurve:
    t = 2 * np.pi * np.arange(N) / N
    e = np.exp(1j * t)
    return ClosedCurve(center + radius * e, 1j * radius * e)


def ellipse(a: float, b: float, N: int) -> ClosedCurve:
    t = 2 * np.pi * np.arange(N) / N
    return ClosedCurve(a * np.cos(t) + 1j * b * np.sin(t), -a * np.sin(t) + 1j * b * np.cos(t))


_NAMED = re.compile(r"^\s*(circle|ellipse)\s*(?:\(([^)]*)\))?\s*$")


def named_curve(name: str, N: int) -> ClosedCurve:
    """``circle``, ``circle(r)`` or ``ellipse(a,b)``."""
    match = _NAMED.match(name)
    if not match:
        raise ConfigError(f"unknown curve {name!r}; use circle, circle(r) or ellipse(a,b)")
    kind, args = match.groups()
    try:
        params = [float(x) for x in args.split(",")] if args and args.strip() else []
    except ValueError as exc:
        raise ConfigError(f"bad curve parameters in {name!r}") from exc
    if kind == "circle" and len(params) <= 1:
        return circle(N, *params)
    if kind == "ellipse" and len(params) == 2:
        return ellipse(params[0], params[1], N)
    raise ConfigError(f"wrong number of parameters in {name!r}")


BOUNDARY_FUNCTIONS = {
    "one": lambda z: np.ones_like(z),
    "z": lambda z: z,
    "z2": lambda z: z**2,
    "z3": lambda z: z**3,
    "exp": np.exp,
    "conj": np.conj,
}


def _targets(Gamma, z):
    z = np.asarray(z, dtype=np.complex128)
    flat = np.atleast_1d(z).ravel()
    dist = np.min(np.abs(flat[:, None] - Gamma.nodes[None, :]), axis=1)
    bad = np.flatnonzero(~(dist > Gamma.exclusion_radius))
    if bad.size:
        raise TooCloseToCurveError(
            f"z={complex(flat[bad[0]])} is within {Gamma.exclusion_radius:.3g} of the curve nodes; "
            "increase N or use plemelj_jump for boundary values"
        )
    return z, flat


def cauchy_transform(Gamma: ClosedCurve, f, z):
    """``(1 / 2 pi i) * integral f(zeta) / (zeta - z) dzeta`` by the periodic trapezoid rule.

    ``z`` may be a scalar or an array of off-curve points.
    """
    z, flat = _targets(Gamma, z)
    weights = Gamma.orientation * Gamma.samples(f) * Gamma.derivatives / (1j * Gamma.N)
    values = _kernels.cauchy_sum(Gamma.nodes, np.ascontiguousarray(weights), np.ascontiguousarray(flat))
    # sum_k w_k / (zeta_k - z) is the full integral including the 1/(2 pi i) factor
    return complex(values[0]) if z.ndim == 0 else values.reshape(z.shape)


def winding_with_residual(Gamma: ClosedCurve, z) -> tuple[int, float]:
    value = cauchy_transform(Gamma, 1.0, complex(z))
    n = int(round(value.real))
    return n, abs(value - n)


def winding_indicator(Gamma: ClosedCurve, z) -> int:
    n, residual = winding_with_residual(Gamma, z)
    if residual >= 0.1:
        raise NonIntegerResidualError(f"winding value is {residual:.3g} away from an integer; curve under-resolved")
    return n


def default_offsets(Gamma: ClosedCurve) -> np.ndarray:
    return Gamma.exclusion_radius * np.array([3.0, 2.5, 2.0, 1.5, 1.25])


def richardson_zero(h, values) -> complex:
    """Value at 0 of the polynomial interpolating ``values`` at nodes ``h`` (Neville)."""
    h = np.asarray(h, dtype=np.float64)
    p = np.array(values, dtype=np.complex128)
    n = h.size
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = (h[j] * p[i] - h[i] * p[i + 1]) / (h[j] - h[i])
    return complex(p[0])


def plemelj_jump(Gamma: ClosedCurve, f, k: int, offsets=None) -> complex:
    """Interior minus exterior limit of the transform at node ``k``; recovers ``f`` at that node."""
    if not 0 <= k < Gamma.N:
        raise ValidationError(f"node index {k} out of range")
    offsets = default_offsets(Gamma) if offsets is None else np.asarray(offsets, dtype=np.float64).ravel()
    if offsets.size < 1 or np.any(offsets <= 0) or np.unique(offsets).size != offsets.size:
        raise ConfigError("offsets must be distinct positive reals")
    if np.min(offsets) <= Gamma.exclusion_radius:
        raise TooCloseToCurveError(
            f"smallest offset {np.min(offsets):.3g} is inside the exclusion radius "
            f"{Gamma.exclusion_radius:.3g}; increase N"
        )
    zeta, n = Gamma.nodes[k], Gamma.normals()[k]
    samples = Gamma.samples(f)
    inner = cauchy_transform(Gamma, samples, zeta - offsets * n)
    outer = cauchy_transform(Gamma, samples, zeta + offsets * n)
    return richardson_zero(offsets, inner - outer)


def holomorphy_check(Gamma: ClosedCurve, f, probes, loop_radius: float, loop_points: int = 64) -> float:
    """Largest ``|loop integral of the transform|`` over small circles around the probes.

    Any function holomorphic near a probe integrates to zero around it, so the
    residual measures how far the discrete transform is from holomorphic.
    """
    if not loop_radius > 0:
        raise ConfigError("loop_radius must be positive")
    probes = np.atleast_1d(np.asarray(probes, dtype=np.complex128)).ravel()
    if probes.size == 0:
        raise ConfigError("need at least one probe")
    gap = Gamma.distance(probes)
    bad = np.flatnonzero(gap <= loop_radius)
    if bad.size:
        raise LoopCrossesCurveError(
            f"loop of radius {loop_radius} around {complex(probes[bad[0]])} meets the curve"
        )
    samples = Gamma.samples(f)
    e = np.exp(2j * np.pi * np.arange(loop_points) / loop_points)
    residual = 0.0
    for p in probes:
        values = cauchy_transform(Gamma, samples, p + loop_radius * e)
        integral = np.sum(values * 1j * loop_radius * e) * (2 * np.pi / loop_points)
        residual = max(residual, abs(integral))
    return float(residual)


def polygon_cauchy_transform(vertices, values, z) -> complex:
    """Exact transform of a piecewise-linear density on a closed polygon.

    On the edge from ``a`` to ``b`` the density is affine in ``zeta``, and
    ``integral (c0 + c1 zeta) / (zeta - z) dzeta`` has the closed form
    ``c1 (b - a) + (c0 + c1 z) log((b - z) / (a - z))``; the principal log is
    the right branch because a straight edge subtends less than pi.
    """
    a = np.asarray(vertices, dtype=np.complex128).ravel()
    fa = np.broadcast_to(np.asarray(values, dtype=np.complex128), a.shape)
    b = np.roll(a, -1)
    fb = np.roll(fa, -1)
    z = complex(z)
    c1 = (fb - fa) / (b - a)
    c0 = fa - c1 * a
    if np.any(a == z):
        raise TooCloseToCurveError("target coincides with a polygon vertex")
    ratio = (b - z) / (a - z)
    if np.any((ratio.imag == 0) & (ratio.real < 0)):
        raise TooCloseToCurveError("target lies on a polygon edge")
    terms = c1 * (b - a) + (c0 + c1 * z) * np.log(ratio)
    return complex(np.sum(terms) / (2j * np.pi))
