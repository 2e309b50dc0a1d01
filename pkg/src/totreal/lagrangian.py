"""Lagrangian surfaces as graphs ``x + i grad(phi)(x)`` of potential gradients."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, EvaluationError, ValidationError
from .subspaces import RealSubspace
from .surfaces import TriangulatedSurface, kuhn_grid

FD_STEP = 1e-5


@dataclass(frozen=True)
class Potential:
    """A smooth real function on a box of R^m with gradient and Hessian evaluators.

    Evaluators take a point of shape ``(m,)``.  Missing gradient or Hessian
    evaluators are replaced by central differences with step ``FD_STEP``.
    """

    value: Callable
    gradient: Callable | None
    hessian: Callable | None
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64))
        if lo.shape != hi.shape or lo.ndim != 1 or np.any(hi <= lo):
            raise ConfigError("domain box needs lo < hi on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if self.gradient is None:
            object.__setattr__(self, "gradient", _fd_gradient(self.value, lo.size))
        if self.hessian is None:
            object.__setattr__(self, "hessian", _fd_hessian(self.gradient, lo.size))

    @property
    def m(self) -> int:
        return self.lo.size

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(x >= self.lo) and np.all(x <= self.hi))

    def symmetry_defect(self, n_samples: int = 16, seed: int = 0) -> float:
        """Largest ``|H_jk - H_kj|`` at random points of the box."""
        rng = np.random.default_rng(seed)
        pts = self.lo + (self.hi - self.lo) * rng.random((n_samples, self.m))
        return max(float(np.max(np.abs(H - H.T))) for H in (np.asarray(self.hessian(p)) for p in pts))

    def check_symmetric(self, tol: float = 1e-10, **kw):
        defect = self.symmetry_defect(**kw)
        if defect > tol:
            raise ValidationError(f"Hessian evaluator is not symmetric (defect {defect:.3e})")


def _fd_gradient(value, m):
    h = FD_STEP

    def grad(x):
        x = np.asarray(x, dtype=np.float64)
        g = np.empty(m)
        for j in range(m):
            e = np.zeros(m)
            e[j] = h
            g[j] = (value(x + e) - value(x - e)) / (2 * h)
        return g

    return grad


def _fd_hessian(gradient, m):
    h = FD_STEP

    def hess(x):
        x = np.asarray(x, dtype=np.float64)
        H = np.empty((m, m))
        for j in range(m):
            e = np.zeros(m)
            e[j] = h
            H[:, j] = (np.asarray(gradient(x + e)) - np.asarray(gradient(x - e))) / (2 * h)
        return 0.5 * (H + H.T)

    return hess


class PolynomialPotential:
    """``sum_t coeff_t * prod_j x_j ** powers_t[j]`` with exact derivatives.

    Behaves as a :class:`Potential` factory via :meth:`potential`.
    """

    def __init__(self, m: int, terms):
        self.m = int(m)
        if self.m < 1:
            raise ConfigError("m must be >= 1")
        powers, coeffs = [], []
        for term in terms:
            if isinstance(term, dict):
                p, c = term["powers"], term["coeff"]
            else:
                p, c = term
            p = [int(k) for k in p]
            if len(p) != self.m or min(p, default=0) < 0:
                raise ValidationError(f"term powers {p} do not match m={self.m}")
            powers.append(p)
            coeffs.append(float(c))
        self.powers = np.array(powers, dtype=np.int64).reshape(-1, self.m)
        self.coeffs = np.array(coeffs, dtype=np.float64)

    @classmethod
    def from_json(cls, data: dict) -> "PolynomialPotential":
        try:
            return cls(data["m"], data["terms"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed potential JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "terms": [{"powers": p.tolist(), "coeff": float(c)} for p, c in zip(self.powers, self.coeffs)],
        }

    def _monomials(self, x, shift):
        # x: (n, m); shift: (m,) lowered powers; returns prod_j x_j**(p_j - shift_j), 0 where negative
        p = self.powers - shift
        ok = np.all(p >= 0, axis=1)
        vals = np.prod(x[:, None, :] ** np.maximum(p, 0)[None], axis=2)
        return vals * ok

    def value(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = self._monomials(x, np.zeros(self.m, dtype=np.int64)) @ self.coeffs
        return out if out.shape[0] > 1 else float(out[0])

    def gradient(self, x):
        X = np.atleast_2d(np.asarray(x, dtype=np.float64))
        G = np.empty((X.shape[0], self.m))
        for j in range(self.m):
            e = np.zeros(self.m, dtype=np.int64)
            e[j] = 1
            G[:, j] = self._monomials(X, e) @ (self.coeffs * self.powers[:, j])
        return G if np.ndim(x) > 1 else G[0]

    def hessian(self, x):
        X = np.atleast_2d(np.asarray(x, dtype=np.float64))
        H = np.empty((X.shape[0], self.m, self.m))
        for j in range(self.m):
            for k in range(j, self.m):
                e = np.zeros(self.m, dtype=np.int64)
                e[j] += 1
                e[k] += 1
                pj = self.powers[:, j]
                factor = pj * (pj - 1) if j == k else pj * self.powers[:, k]
                H[:, j, k] = H[:, k, j] = self._monomials(X, e) @ (self.coeffs * factor)
        return H if np.ndim(x) > 1 else H[0]

    def potential(self, lo=0.0, hi=1.0) -> Potential:
        lo = np.broadcast_to(np.asarray(lo, dtype=np.float64), (self.m,))
        hi = np.broadcast_to(np.asarray(hi, dtype=np.float64), (self.m,))
        return Potential(self.value, self.gradient, self.hessian, lo, hi)


def random_polynomial(m: int, seed: int, degree: int = 4, scale: float = 1.0) -> PolynomialPotential:
    """All monomials of total degree 2..``degree`` with uniform coefficients in [-scale, scale]."""
    rng = np.random.default_rng(seed)
    terms = []
    for p in itertools.product(range(degree + 1), repeat=m):
        if 2 <= sum(p) <= degree:
            terms.append((p, scale * rng.uniform(-1.0, 1.0)))
    return PolynomialPotential(m, terms)


def gradient_graph(phi: Potential, grid) -> TriangulatedSurface:
    """Kuhn-triangulated graph ``{x + i grad(phi)(x)}`` over the potential's box, density 1."""
    points, simplices, signs = kuhn_grid(phi.m, grid, phi.lo, phi.hi)
    grads = _batch(phi.gradient, points, (phi.m,))
    bad = np.flatnonzero(~np.all(np.isfinite(grads), axis=1))
    if bad.size:
        raise EvaluationError("gradient is not finite", location=points[bad[0]].tolist())
    return TriangulatedSurface(points + 1j * grads, simplices, signs)


def _batch(fn, points, shape):
    try:
        out = np.asarray(fn(points), dtype=np.float64)
        if out.shape == (points.shape[0],) + shape:
            return out
    except (ValueError, TypeError, IndexError):
        pass
    return np.array([np.asarray(fn(p), dtype=np.float64) for p in points]).reshape((points.shape[0],) + shape)


def exact_tangent(phi: Potential, x) -> RealSubspace:
    """Plane spanned by ``e_j + i H(x) e_j`` in axis order."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (phi.m,):
        raise ValidationError(f"point must have shape ({phi.m},)")
    if not phi.contains(x):
        raise ValidationError("point lies outside the potential's domain box")
    H = np.asarray(phi.hessian(x), dtype=np.float64).reshape(phi.m, phi.m)
    if not np.all(np.isfinite(H)):
        raise EvaluationError("Hessian is not finite", location=x.tolist())
    return RealSubspace((np.eye(phi.m) + 1j * H).T, oriented=True)
