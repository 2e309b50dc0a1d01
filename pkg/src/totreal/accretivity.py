"""Cell-average diagnostics for the restricted complex volume form.

For a cell Q of an ambient dyadic grid, the ratio

    |sum_{s in Q} sign_s det(Z_s) / m!|  /  sum_{s in Q} |det(Z_s)| / m!

compares the average of the restricted form with the average of its absolute
value.  Lower bounds on it over all cells express that the form does not
cancel out on any scale.  Simplices are assigned to cells by centroid, so the
cell numerators at any level add up to the global integral exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _linalg
from .errors import ConfigError, EmptyCellError, EmptySurfaceError
from .surfaces import TriangulatedSurface

MAX_DEPTH = 24
ROOT_PADDING = 0.01


@dataclass(frozen=True)
class CellPartition:
    """Dyadic cubes of R^{2m} meeting the surface, by level.

    ``levels[l]`` maps an integer cell index (one coordinate per real axis)
    to the sorted array of simplex ids whose centroid falls in that cell.
    """

    root_lo: np.ndarray
    root_side: float
    depth: int
    levels: tuple

    def cells(self, level: int) -> dict:
        return self.levels[level]

    def cell_box(self, level: int, index) -> tuple[np.ndarray, np.ndarray]:
        side = self.root_side / 2**level
        lo = self.root_lo + side * np.asarray(index, dtype=np.float64)
        return lo, lo + side


def build_dyadic_cells(M: TriangulatedSurface, depth: int) -> CellPartition:
    """Root cube: the bounding cube of the vertices, enlarged by 1% about its center."""
    if not 0 <= depth <= MAX_DEPTH:
        raise ConfigError(f"depth must lie in [0, {MAX_DEPTH}]")
    if len(M) == 0:
        raise EmptySurfaceError("surface has no simplices")
    R = _linalg.realify(M.vertices.T).T
    lo, hi = R.min(axis=0), R.max(axis=0)
    side = float(np.max(hi - lo)) * (1 + ROOT_PADDING)
    if side == 0.0:
        side = 1.0
    root_lo = (lo + hi) / 2 - side / 2
    cent = _linalg.realify(M.centroids.T).T
    unit = (cent - root_lo) / side
    levels = []
    for level in range(depth + 1):
        n = 2**level
        idx = np.clip(np.floor(unit * n).astype(np.int64), 0, n - 1)
        keys, inverse = np.unique(idx, axis=0, return_inverse=True)
        inverse = inverse.ravel()
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(keys.shape[0] + 1))
        levels.append({
            tuple(int(v) for v in key): order[bounds[i]:bounds[i + 1]]
            for i, key in enumerate(keys)
        })
    return CellPartition(root_lo, side, depth, tuple(levels))


def cell_sums(M: TriangulatedSurface, cell) -> tuple[complex, float]:
    """Numerator (integral of the restricted form) and denominator (integral of its modulus)."""
    ids = np.asarray(cell, dtype=np.int64)
    if ids.size == 0:
        raise EmptyCellError("cell contains no simplex centroid")
    values = M.form_values[ids]
    return complex(np.sum(values)), float(np.sum(np.abs(values)))


def accretivity_ratio(M: TriangulatedSurface, cell) -> float:
    """``|integral of the form| / integral of its modulus`` over a cell, given by its simplex ids."""
    num, den = cell_sums(M, cell)
    if den == 0.0:
        return 0.0
    return min(abs(num) / den, 1.0)


@dataclass
class LevelSummary:
    level: int
    cells: list
    min_ratio: float
    argmin_cell: list
    fraction_below: float

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "min_ratio": self.min_ratio,
            "argmin_cell": self.argmin_cell,
            "fraction_below": self.fraction_below,
            "cells": self.cells,
        }


@dataclass
class AccretivityReport:
    delta: float
    levels: list
    min_level: int
    min_ratio: float
    verdict: bool

    def to_json(self) -> dict:
        out = {
            "delta": self.delta,
            "min_level": self.min_level,
            "min_ratio": self.min_ratio,
            "verdict": "pass" if self.verdict else "fail",
            "levels": [lv.to_json() for lv in self.levels],
        }
        for lv in out["levels"]:
            lv["passes"] = lv["min_ratio"] >= self.delta
        return out


def pseudo_accretivity_report(M: TriangulatedSurface, P: CellPartition, delta: float,
                              min_level: int | None = None) -> AccretivityReport:
    """Per-level minimum ratio with its cell, plus the fraction of cells below ``delta``.

    Every level gets its own pass flag; the overall verdict asks for
    ``min ratio >= delta`` on levels ``min_level..depth`` (default: the finest
    level only).  The below-delta fractions are descriptive; no
    para-accretivity verdict is derived from them.
    """
    if not 0 < delta <= 1:
        raise ConfigError("delta must lie in (0, 1]")
    if not P.levels or not P.levels[0]:
        raise ConfigError("partition is empty")
    min_level = P.depth if min_level is None else int(min_level)
    if not 0 <= min_level <= P.depth:
        raise ConfigError(f"min_level must lie in [0, {P.depth}]")
    summaries = []
    for level, cells in enumerate(P.levels):
        rows = []
        for key in sorted(cells):
            ids = cells[key]
            num, den = cell_sums(M, ids)
            ratio = min(abs(num) / den, 1.0) if den > 0 else 0.0
            rows.append({
                "cell_id": list(key),
                "count": int(ids.size),
                "numerator": [num.real, num.imag],
                "denominator": den,
                "ratio": ratio,
            })
        ratios = [r["ratio"] for r in rows]
        worst = int(np.argmin(ratios))
        summaries.append(LevelSummary(
            level=level,
            cells=rows,
            min_ratio=ratios[worst],
            argmin_cell=rows[worst]["cell_id"],
            fraction_below=sum(r < delta for r in ratios) / len(ratios),
        ))
    overall = min(s.min_ratio for s in summaries[min_level:])
    return AccretivityReport(delta, summaries, min_level, overall, overall >= delta)
