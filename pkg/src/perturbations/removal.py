"""
Removal curves: confidence-ranked sample removal (RGA) and importance-ranked
feature removal (RGE).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..base import Dataset, ModelKind
from ..base.errors import ShapeMismatch, SingleClassSplit
from ..log.logger import get_logger
from ..metrics import RgCurve, rga_multiclass, rge_score
from ..models import TrainConfig, train_model
from .grids import RGA_MAX_FRACTION, linear_grid, validate_grid

log = get_logger(__name__)

DEFAULT_RGA_FRACTIONS = linear_grid(0.9, 0.1)
DEFAULT_RGE_FRACTIONS = linear_grid(1.0, 0.1)
LINEAR_PROBE_SOURCE = "linear-probe coefficient magnitude"
# guards floor/ceil of f * n against 0.1 * 30 = 3.0000000000000004
_GRID_SLACK = 1e-9


def removal_count(fraction: float, n: int) -> int:
    """Number of most-confident samples dropped at `fraction`"""
    return int(math.floor(fraction * n + _GRID_SLACK))


def removed_feature_count(fraction: float, d: int) -> int:
    """Number of top-ranked features zeroed at `fraction`"""
    return min(d, max(0, int(math.ceil(fraction * d - _GRID_SLACK))))


def rga_removal_curve(probs: np.ndarray, labels, removal_fractions=DEFAULT_RGA_FRACTIONS) -> RgCurve:
    """
    Drop the most confident samples first (confidence = max class probability)
    and score RGA on what remains. Levels whose remainder holds a single class
    are recorded as NaN and left out of the area.
    """
    fractions = validate_grid(removal_fractions, "rga fractions", upper=RGA_MAX_FRACTION)
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if probs.ndim != 2 or probs.shape[0] != labels.size:
        raise ShapeMismatch(f"probability matrix {probs.shape} does not match {labels.size} labels")

    n = labels.size
    by_confidence = np.argsort(-probs.max(axis=1), kind="stable")
    scores = []
    for fraction in fractions:
        keep = np.sort(by_confidence[removal_count(fraction, n):])
        try:
            scores.append(rga_multiclass(labels[keep], probs[keep]))
        except SingleClassSplit:
            log.warning(f"⚠️ RGA removal at fraction {fraction:g} leaves a single class; level skipped")
            scores.append(np.nan)
    return RgCurve(fractions, np.array(scores))


@dataclass(frozen=True)
class FeatureRanking:
    """Feature indices, most important first, shared by every model in a fold"""
    order: np.ndarray
    source: str = LINEAR_PROBE_SOURCE

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64).reshape(-1)
        if not np.array_equal(np.sort(order), np.arange(order.size)):
            raise ShapeMismatch("feature ranking must be a permutation of 0..d-1")
        object.__setattr__(self, "order", order)

    def top(self, count: int) -> np.ndarray:
        return self.order[:count]


def feature_importance_ranking(train_set: Dataset, config=None, l2_strength: float = 1e-3) -> FeatureRanking:
    """
    Fit the Linear baseline on the (standardized) training split and rank
    feature j by sum_c |W[c, j]|, ties broken by lower index.
    """
    config = TrainConfig() if config is None else config
    probe = train_model(ModelKind.LINEAR, train_set, replace(config, l2_strength=l2_strength))
    importance = np.abs(probe.layer.weight).sum(axis=0)
    order = np.argsort(-importance, kind="stable")
    log.debug(f"🏷️ Feature ranking from linear probe, top features {order[:5].tolist()}")
    return FeatureRanking(order)


def remove_features(features: np.ndarray, ranking: FeatureRanking, fraction: float) -> np.ndarray:
    """Copy of `features` with the top ceil(fraction * d) ranked columns set to 0 (the standardized mean)"""
    features = np.array(features, dtype=np.float64)
    if features.shape[1] != ranking.order.size:
        raise ShapeMismatch(f"ranking covers {ranking.order.size} features, data has {features.shape[1]}")
    features[:, ranking.top(removed_feature_count(fraction, features.shape[1]))] = 0.0
    return features


def rge_removal_curve(model, test_set: Dataset, ranking: FeatureRanking, labels=None,
                      removal_fractions=DEFAULT_RGE_FRACTIONS) -> RgCurve:
    """RGE of reduced-input predictions against full-input predictions per removal fraction"""
    fractions = validate_grid(removal_fractions, "rge fractions", upper=1.0)
    labels = test_set.labels if labels is None else np.asarray(labels)
    full = model.predict_proba(test_set.features)
    scores = []
    for fraction in fractions:
        reduced = model.predict_proba(remove_features(test_set.features, ranking, fraction))
        scores.append(rge_score(full, reduced, labels))
    curve = RgCurve(fractions, np.array(scores))
    log.debug(f"✂️ RGE removal curve for {model!r}: AURGE={curve.area:.4f}")
    return curve
