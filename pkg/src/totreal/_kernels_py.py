"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or disabled; the compiled
versions in ``_kernels_ext.pyx`` follow the same algorithm simplex by simplex.
"""
from __future__ import annotations

import numpy as np


def ball_mass(verts, mass, center, radius, child_bary, leaf_bary, min_size, max_depth):
    """Total of ``mass * |simplex ∩ ball| / |simplex|`` over a stack of simplices.

    ``verts`` has shape ``(S, m+1, d)``.  Simplices entirely inside the ball
    count fully, those provably outside count zero, and straddling ones are
    subdivided by ``child_bary`` until they are smaller than ``min_size`` or
    ``max_depth`` is reached, where the lattice ``leaf_bary`` is sampled.
    """
    V = np.asarray(verts, dtype=np.float64)
    W = np.asarray(mass, dtype=np.float64)
    c = np.asarray(center, dtype=np.float64)
    r2 = radius * radius
    n_children = child_bary.shape[0]
    n_leaf = leaf_bary.shape[0]
    total = 0.0
    depth = 0
    while V.shape[0]:
        diff = V - c
        inside = np.all(np.einsum("kvd,kvd->kv", diff, diff) <= r2, axis=1)
        total += W[inside].sum()
        g = V.mean(axis=1)
        spread = np.sqrt(np.max(np.einsum("kvd,kvd->kv", V - g[:, None], V - g[:, None]), axis=1))
        dist = np.sqrt(np.einsum("kd,kd->k", g - c, g - c))
        straddle = ~inside & (dist <= radius + spread)
        leaf = straddle & ((depth >= max_depth) | (2.0 * spread <= min_size))
        if leaf.any():
            pts = np.einsum("pv,kvd->kpd", leaf_bary, V[leaf]) - c
            hits = np.count_nonzero(np.einsum("kpd,kpd->kp", pts, pts) <= r2, axis=1)
            total += (W[leaf] * hits / n_leaf).sum()
        split = straddle & ~leaf
        V = np.einsum("cij,kjd->kcid", child_bary, V[split]).reshape(-1, V.shape[1], V.shape[2])
        W = np.repeat(W[split] / n_children, n_children)
        depth += 1
    return float(total)


def cauchy_sum(nodes, weights, targets):
    """``sum_k weights_k / (nodes_k - z)`` for every target ``z``."""
    nodes = np.asarray(nodes, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.complex128)
    targets = np.atleast_1d(np.asarray(targets, dtype=np.complex128))
    return (weights[None, :] / (nodes[None, :] - targets[:, None])).sum(axis=1)
