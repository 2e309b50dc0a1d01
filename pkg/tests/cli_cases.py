"""A fixed corpus of CLI invocations, run in-process."""
import io
import json
import sys
from pathlib import Path

import numpy as np

from totreal import cli
from totreal import surfaces as sf


def write_fixtures(root: Path) -> dict:
    root.mkdir(parents=True, exist_ok=True)
    paths = {}
    rm = {"m": 3, "basis": [[[1.0 if j == k else 0.0, 0.0] for k in range(3)] for j in range(3)], "oriented": True}
    paths["rm"] = root / "rm.json"
    paths["rm"].write_text(json.dumps(rm))
    degenerate = {"m": 2, "basis": [[[1.0, 0.0], [0.0, 0.0]], [[2.0, 0.0], [0.0, 0.0]]]}
    paths["degenerate"] = root / "degenerate.json"
    paths["degenerate"].write_text(json.dumps(degenerate))
    paths["patch"] = root / "patch.trmesh"
    paths["patch"].write_text(sf.to_trmesh(sf.flat_patch(2, 6, -1.0, 1.0)))
    paths["potential"] = root / "potential.json"
    paths["potential"].write_text(json.dumps({"m": 2, "terms": [
        {"powers": [2, 0], "coeff": 0.5}, {"powers": [1, 2], "coeff": -0.3}, {"powers": [0, 4], "coeff": 0.2}]}))
    return paths


def invocations(paths: dict) -> list:
    p = {k: str(v) for k, v in paths.items()}
    return [
        ["plane", "analyze", "--input", p["rm"]],
        ["plane", "analyze", "--input", p["degenerate"]],
        ["plane", "random", "--m", "4", "--seed", "7", "--lagrangian", "--special"],
        ["plane", "random", "--m", "3", "--seed", "11"],
        ["surface", "analyze", "--input", p["patch"], "--centers", "4", "--radii", "0.05,0.2,3", "--seed", "0"],
        ["surface", "gen-gradient-graph", "--potential", p["potential"], "--grid", "4"],
        ["cauchy", "eval", "--curve", "circle", "--N", "256", "--f", "one", "--z", "0", "--z", "2"],
        ["cauchy", "eval", "--curve", "ellipse(2,1)", "--N", "128", "--f", "z2", "--z", "0.5+0.25i"],
        ["cauchy", "jump", "--N", "256", "--f", "exp", "--node", "0", "--node", "100"],
        ["cauchy", "holomorphy", "--f", "z3", "--probe", "0.3", "--probe=-0.2+0.4i"],
        ["cauchy", "eval", "--N", "64", "--z", "1"],
        ["accretivity", "report", "--curve", "circle", "--N", "256", "--depth", "3", "--delta", "0.5"],
        ["accretivity", "report", "--input", p["patch"], "--depth", "2", "--delta", "1.0"],
    ]


def invoke(argv, stdin_text=None):
    out = io.StringIO()
    saved = sys.stdin
    if stdin_text is not None:
        sys.stdin = io.StringIO(stdin_text)
    try:
        code = _run(argv, out)
    finally:
        sys.stdin = saved
    return code, out.getvalue()


def _run(argv, out):
    try:
        return cli.run(argv, stdout=out)
    except SystemExit as exc:
        return exc.code


def run_suite(root: Path) -> list:
    paths = write_fixtures(root)
    rows = []
    for argv in invocations(paths):
        code, text = invoke(argv)
        # file paths differ between runs; strip the root so outputs compare across temp dirs
        rows.append((code, text.replace(str(root), "<root>")))
    plane = rows[2][1]
    rows.append(invoke(["plane", "analyze", "--stdin"], stdin_text=plane))
    return rows


def max_abs(values) -> float:
    return float(np.max(np.abs(values)))
