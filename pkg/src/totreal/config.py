from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds shared by the classifiers and the CLI.

    ``rank_tol`` is relative: a basis is degenerate when its smallest real
    singular value falls below ``rank_tol`` times the largest.
    """

    coefficient_tol: float = 1e-9
    lagrangian_tol: float = 1e-7
    unitary_tol: float = 1e-10
    rank_tol: float = 1e-10
    phase_tol: float = 1e-9

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (value > 0):
                raise ConfigError(f"{field.name} must be positive, got {value!r}")

    def replace(self, **changes) -> "ToleranceConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOLERANCES = ToleranceConfig()
