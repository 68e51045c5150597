"""Perturbation level grids and the curve configuration that bundles them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..base.errors import DegenerateGrid

RGA_MAX_FRACTION = 0.95


def linear_grid(stop: float, step: float) -> tuple[float, ...]:
    """0, step, 2*step, ..., stop computed as i*step so every level is exact to one rounding"""
    count = int(round(stop / step))
    return tuple(round(i * step, 12) for i in range(count + 1))


def validate_grid(levels, name: str, upper: float | None = None) -> np.ndarray:
    """At least two levels, starting at 0, strictly ascending, optionally bounded above"""
    levels = np.asarray(levels, dtype=np.float64).reshape(-1)
    if levels.size < 2:
        raise DegenerateGrid(f"{name}: need >= 2 levels, got {levels.size}")
    if not np.all(np.isfinite(levels)):
        raise DegenerateGrid(f"{name}: levels must be finite")
    if levels[0] != 0.0:
        raise DegenerateGrid(f"{name}: grid must start at 0, got {levels[0]}")
    if np.any(np.diff(levels) <= 0):
        raise DegenerateGrid(f"{name}: levels must be strictly ascending")
    if upper is not None and levels[-1] > upper + 1e-12:
        raise DegenerateGrid(f"{name}: levels must not exceed {upper}, got {levels[-1]}")
    return levels


@dataclass(frozen=True)
class CurveConfig:
    """Level grids for the four SAFE curves plus the L2 strength of the ranking probe"""
    noise_multipliers: tuple[float, ...] = field(default_factory=lambda: linear_grid(3.0, 0.25))
    fgsm_epsilons: tuple[float, ...] = field(default_factory=lambda: linear_grid(0.5, 0.05))
    rga_fractions: tuple[float, ...] = field(default_factory=lambda: linear_grid(0.9, 0.1))
    rge_fractions: tuple[float, ...] = field(default_factory=lambda: linear_grid(1.0, 0.1))
    ranking_l2: float = 1e-3

    def __post_init__(self):
        for name in ("noise_multipliers", "fgsm_epsilons", "rga_fractions", "rge_fractions"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        validate_grid(self.noise_multipliers, "noise_multipliers")
        validate_grid(self.fgsm_epsilons, "fgsm_epsilons")
        validate_grid(self.rga_fractions, "rga_fractions", upper=RGA_MAX_FRACTION)
        validate_grid(self.rge_fractions, "rge_fractions", upper=1.0)
        if self.ranking_l2 < 0:
            raise DegenerateGrid(f"ranking_l2 must be >= 0, got {self.ranking_l2}")

    def to_dict(self) -> dict:
        return {
            "noise_multipliers": list(self.noise_multipliers),
            "fgsm_epsilons": list(self.fgsm_epsilons),
            "rga_fractions": list(self.rga_fractions),
            "rge_fractions": list(self.rge_fractions),
            "ranking_l2": self.ranking_l2,
        }
