from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..log.logger import get_logger
from .errors import ConfigError, InvalidDataset, LabelOutOfRange

# Get logger for this module
log = get_logger(__name__)


class ModelKind(Enum):
    """Enum for the classifier families compared by the experiments"""
    QML = "qml"
    MLP = "mlp"
    LINEAR = "linear"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        """Parse a case-insensitive kind name ('QML', 'mlp', 'Linear')"""
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown model kind: {text!r}. Available: {[k.value for k in cls]}") from None

    @property
    def label(self) -> str:
        return {"qml": "QML", "mlp": "MLP", "linear": "Linear"}[self.value]


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (samples x d) with integer class labels"""
    features: np.ndarray
    labels: np.ndarray
    n_classes: int

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)
        if features.ndim != 2:
            raise InvalidDataset(f"features must be a 2-d matrix, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise InvalidDataset(
                f"labels shape {labels.shape} does not match {features.shape[0]} samples"
            )
        if not np.all(np.isfinite(features)):
            raise InvalidDataset("features contain non-finite entries")
        if labels.size and not np.issubdtype(labels.dtype, np.integer):
            if not np.all(np.equal(np.mod(labels, 1), 0)):
                raise InvalidDataset("labels must be integers")
        labels = labels.astype(np.int64)
        if self.n_classes < 2:
            raise InvalidDataset(f"n_classes must be >= 2, got {self.n_classes}")
        bad = np.flatnonzero((labels < 0) | (labels >= self.n_classes))
        if bad.size:
            raise LabelOutOfRange(int(labels[bad[0]]), row=int(bad[0]), n_classes=self.n_classes)
        if features.shape[0] < self.n_classes:
            raise InvalidDataset(
                f"{features.shape[0]} samples cannot cover {self.n_classes} classes"
            )
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def with_features(self, features: np.ndarray) -> "Dataset":
        return Dataset(features, self.labels, self.n_classes)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def __repr__(self) -> str:
        return f"Dataset(n={self.n_samples}, d={self.n_features}, n_classes={self.n_classes})"


def derive_seed(seed: int, *keys: int) -> int:
    """
    Derive an independent child seed from a root seed and integer keys
    (fold index, grid level, ...). Counter-based, so order of evaluation never matters.
    """
    entropy = [int(seed), *(int(k) for k in keys)]
    if min(entropy) < 0:
        raise ConfigError(f"seeds and keys must be non-negative, got {entropy}")
    sequence = np.random.SeedSequence(entropy)
    return int(sequence.generate_state(1, dtype=np.uint32)[0])
