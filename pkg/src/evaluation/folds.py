"""Stratified k-fold plans and per-fold standardization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..base.errors import ClassTooSmall, ConfigError, EmptyInput, ShapeMismatch
from ..log.logger import get_logger

log = get_logger(__name__)

STD_FLOOR = 1e-8


@dataclass(frozen=True)
class FoldPlan:
    """Fold index per sample; fold f is the validation split of round f"""
    k: int
    assignments: np.ndarray
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def stratified_kfold(labels, k: int = 5, seed: int = 0) -> FoldPlan:
    """
    Shuffle each class with a seeded generator and deal its members round-robin
    over the folds. Each class starts where the previous one stopped, so overall
    fold sizes stay within one of each other as well.
    """
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if k < 2:
        raise ConfigError(f"k-fold needs k >= 2, got {k}")
    classes, counts = np.unique(labels, return_counts=True)
    small = classes[counts < k]
    if small.size:
        raise ClassTooSmall(
            f"class {int(small[0])} has {int(counts[classes == small[0]][0])} members, fewer than k={k}"
        )

    rng = np.random.default_rng(seed)
    assignments = np.empty(labels.size, dtype=np.int64)
    offset = 0
    for c in classes:
        members = rng.permutation(np.flatnonzero(labels == c))
        assignments[members] = (offset + np.arange(members.size)) % k
        offset = (offset + members.size) % k

    plan = FoldPlan(k, assignments, seed)
    log.debug(f"🗂️ Stratified {k}-fold plan, fold sizes {plan.fold_sizes().tolist()}")
    return plan


@dataclass(frozen=True)
class Scaler:
    """Per-feature training mean and (floored) standard deviation"""
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> "Scaler":
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] == 0:
            raise EmptyInput("cannot fit a scaler on an empty training split")
        mean = features.mean(axis=0)
        constant = np.ptp(features, axis=0) == 0
        # constant columns map to exact zeros
        mean[constant] = features[0, constant]
        scale = np.maximum(features.std(axis=0), STD_FLOOR)
        return cls(mean, scale)

    def transform(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.shape[-1] != self.mean.size:
            raise ShapeMismatch(f"scaler fitted on {self.mean.size} features, got {features.shape[-1]}")
        return (features - self.mean) / self.scale


def standardize(train_features: np.ndarray, apply_to: np.ndarray | None = None
                ) -> tuple[np.ndarray, np.ndarray | None, Scaler]:
    """Fit on the training split only and transform both splits with the same statistics"""
    scaler = Scaler.fit(train_features)
    transformed = None if apply_to is None else scaler.transform(apply_to)
    return scaler.transform(train_features), transformed, scaler
