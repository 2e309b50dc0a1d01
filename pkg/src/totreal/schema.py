"""JSON schemas for every document the command line emits."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

KINDS = (
    "plane",
    "plane_report",
    "surface_report",
    "gradient_graph_report",
    "cauchy_eval",
    "cauchy_jump",
    "cauchy_holomorphy",
    "accretivity_report",
    "error",
)


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    if kind not in KINDS:
        raise KeyError(f"no schema for {kind!r}")
    return json.loads(resources.files("totreal").joinpath("schemas", kind + ".json").read_text(encoding="utf-8"))


def schema_for(document: dict) -> dict:
    """Schema matching a CLI output; documents without ``kind`` are plane JSON."""
    return load_schema(document.get("kind", "plane"))
