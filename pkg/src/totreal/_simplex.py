"""Edgewise (Freudenthal) subdivision tables for an m-simplex.

The reference simplex is ``{1 >= t_1 >= ... >= t_m >= 0}``.  Cutting the unit
cube into ``k^m`` subcubes and each subcube into Kuhn simplices gives a
triangulation whose pieces inside the reference simplex number exactly
``k^m`` and all have equal volume.  Tables are returned in barycentric
coordinates of the parent vertices so they apply to any affine simplex.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def _t_to_barycentric(t: np.ndarray) -> np.ndarray:
    m = t.shape[-1]
    lam = np.empty(t.shape[:-1] + (m + 1,))
    lam[..., 0] = 1.0 - t[..., 0]
    lam[..., 1:m] = t[..., : m - 1] - t[..., 1:]
    lam[..., m] = t[..., m - 1]
    return lam


@lru_cache(maxsize=None)
def subdivision(m: int, k: int) -> np.ndarray:
    """Children of the order-k edgewise subdivision, shape ``(k^m, m+1, m+1)``.

    ``table[c, i]`` holds the barycentric coordinates of vertex ``i`` of child
    ``c``.  Child vertices are listed along a Kuhn path, so every child is
    again an affine image of the reference simplex.
    """
    children = []
    for corner in itertools.product(range(k), repeat=m):
        base = np.array(corner, dtype=np.float64)
        for perm in itertools.permutations(range(m)):
            verts = [base.copy()]
            for axis in perm:
                nxt = verts[-1].copy()
                nxt[axis] += 1.0
                verts.append(nxt)
            verts = np.array(verts) / k
            g = verts.mean(axis=0)
            if g[0] <= 1.0 and g[-1] >= 0.0 and np.all(np.diff(g) <= 0.0):
                children.append(_t_to_barycentric(verts))
    table = np.array(children)
    assert table.shape[0] == k**m
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def lattice(m: int, k: int) -> np.ndarray:
    """Barycentric sample points: centroids of the order-k children, shape ``(k^m, m+1)``."""
    pts = subdivision(m, k).mean(axis=1)
    pts.setflags(write=False)
    return pts


def simplex_volume(edges: np.ndarray) -> np.ndarray:
    """Volume of simplices from real edge matrices of shape ``(..., d, m)``."""
    m = edges.shape[-1]
    G = np.swapaxes(edges, -1, -2) @ edges
    return np.sqrt(np.maximum(np.linalg.det(G), 0.0)) / math.factorial(m)
