"""Seeded Gaussian class clusters, a desk-scale stand-in for extracted image features."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..base import Dataset
from ..base.errors import InvalidSpec
from ..log.logger import get_logger

log = get_logger(__name__)

MIN_SAMPLES_PER_CLASS = 5


@dataclass(frozen=True)
class SyntheticSpec:
    """Cluster layout; separation is in units of the within-class std (which is 1)"""
    n_samples: int = 600
    n_features: int = 64
    n_classes: int = 3
    separation: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.n_classes < 2:
            raise InvalidSpec(f"n_classes must be >= 2, got {self.n_classes}")
        if self.n_features < self.n_classes:
            raise InvalidSpec(f"need n_features >= n_classes for orthogonal centers, "
                              f"got d={self.n_features}, classes={self.n_classes}")
        if self.n_samples < MIN_SAMPLES_PER_CLASS * self.n_classes:
            raise InvalidSpec(f"n_samples must be >= {MIN_SAMPLES_PER_CLASS} * n_classes, got {self.n_samples}")
        if not self.separation > 0:
            raise InvalidSpec(f"separation must be > 0, got {self.separation}")

    def to_dict(self) -> dict:
        return asdict(self)


def class_centers(spec: SyntheticSpec, rng: np.random.Generator) -> np.ndarray:
    """
    Orthonormal directions (QR of a Gaussian matrix) scaled so every pair of
    centers sits exactly separation * sqrt(d) apart.
    """
    q, _ = np.linalg.qr(rng.standard_normal((spec.n_features, spec.n_classes)))
    radius = spec.separation * np.sqrt(spec.n_features) / np.sqrt(2.0)
    return q.T * radius


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """Balanced isotropic clusters, shuffled; identical output for identical specs"""
    rng = np.random.default_rng(spec.seed)
    centers = class_centers(spec, rng)
    base, extra = divmod(spec.n_samples, spec.n_classes)
    counts = [base + (1 if c < extra else 0) for c in range(spec.n_classes)]
    labels = np.repeat(np.arange(spec.n_classes), counts)
    features = centers[labels] + rng.standard_normal((spec.n_samples, spec.n_features))
    order = rng.permutation(spec.n_samples)
    dataset = Dataset(features[order], labels[order], spec.n_classes)
    log.info(f"🧪 Generated synthetic {dataset!r} (separation={spec.separation}, seed={spec.seed})")
    return dataset
