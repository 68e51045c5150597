"""Gaussian feature-noise perturbations and the RGR noise curve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..base import Dataset, derive_seed
from ..base.errors import ShapeMismatch
from ..log.logger import get_logger
from ..metrics import RgCurve, rgr_score
from .grids import linear_grid, validate_grid

log = get_logger(__name__)


@dataclass(frozen=True)
class NoiseGrid:
    """
    Noise intensities as fractions of each feature's test-split standard
    deviation (its "signal range"); per-feature, not pooled.
    """
    multipliers: np.ndarray
    per_feature_sigma: np.ndarray

    def __post_init__(self):
        multipliers = validate_grid(self.multipliers, "noise multipliers")
        sigma = np.asarray(self.per_feature_sigma, dtype=np.float64).reshape(-1)
        if np.any(~np.isfinite(sigma)) or np.any(sigma < 0):
            raise ShapeMismatch("per-feature sigma must be finite and nonnegative")
        object.__setattr__(self, "multipliers", multipliers)
        object.__setattr__(self, "per_feature_sigma", sigma)

    @classmethod
    def from_features(cls, features: np.ndarray, multipliers=None) -> "NoiseGrid":
        """Population standard deviation of every column of `features`"""
        if multipliers is None:
            multipliers = linear_grid(3.0, 0.25)
        features = np.asarray(features, dtype=np.float64)
        return cls(np.asarray(multipliers), features.std(axis=0))


def gaussian_perturb(features: np.ndarray, sigma: np.ndarray, multiplier: float, seed: int) -> np.ndarray:
    """features + N(0, (multiplier * sigma_j)^2), independent per entry; multiplier 0 is the identity"""
    features = np.asarray(features, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64).reshape(-1)
    if features.ndim != 2 or features.shape[1] != sigma.size:
        raise ShapeMismatch(f"features {features.shape} vs sigma of length {sigma.size}")
    if multiplier < 0:
        raise ShapeMismatch(f"noise multiplier must be >= 0, got {multiplier}")
    if multiplier == 0:
        return features.copy()
    rng = np.random.default_rng(seed)
    return features + rng.standard_normal(features.shape) * (multiplier * sigma)


def rgr_noise_curve(model, test_set: Dataset, grid: NoiseGrid, labels=None, seed: int = 0) -> RgCurve:
    """RGR of the perturbed predictions against the clean ones, one level per multiplier"""
    labels = test_set.labels if labels is None else np.asarray(labels)
    original = model.predict_proba(test_set.features)
    scores = []
    for index, multiplier in enumerate(grid.multipliers):
        noisy = gaussian_perturb(test_set.features, grid.per_feature_sigma, multiplier,
                                 derive_seed(seed, index))
        scores.append(rgr_score(original, model.predict_proba(noisy), labels))
    curve = RgCurve(grid.multipliers, np.array(scores))
    log.debug(f"🌫️ RGR noise curve for {model!r}: AURGR={curve.area:.4f}")
    return curve
