"""Numerical tolerances shared across the library."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_TOL_ALG = "CHERBOLIC_TOL_ALG"


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-9  # relative, for matrix and vector identities
    angular: float = 1e-6  # absolute, radians or hyperbolic length
    zero: float = 1e-8  # relative zero-threshold for sign decisions
    projective: float = 1e-8  # sine of the angle between two lifts
    borderline: float = 1e-7  # band inside which classification refuses to guess
    cluster: float = 1e-4  # eigenvalues closer than this are one repeated value
    max_order: int = 2000

    def __post_init__(self):
        for name in ("algebraic", "angular", "zero", "projective", "borderline", "cluster"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name} must be positive")
        if self.max_order < 8:
            raise ValueError("max_order must be at least 8")

    def with_overrides(self, **kwargs) -> "Tolerances":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


def default_tolerances() -> Tolerances:
    """Defaults, with the algebraic tolerance overridable from the environment."""
    tol = Tolerances()
    raw = os.environ.get(ENV_TOL_ALG)
    if raw:
        tol = tol.with_overrides(algebraic=float(raw))
    return tol


DEFAULT = Tolerances()
