"""
Rank-graduation (RG) metric family.

The authoritative RG estimator is the concordance / dual-Lorenz form: order the
reference values by the candidate ranking and compare the cumulative curve with
the best (descending) and worst (ascending) orderings. For a binary reference it
equals the pairwise AUC. The CvM / Gini form is exposed alongside it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..base.errors import (
    ConstantReference,
    DegenerateGrid,
    EmptyInput,
    NonPositiveMean,
    ShapeMismatch,
    SingleClassSplit,
)


@dataclass(frozen=True)
class ScorePair:
    """Index-aligned reference values Y and candidate values Y'"""
    reference: np.ndarray
    candidate: np.ndarray

    def __post_init__(self):
        reference = np.asarray(self.reference, dtype=np.float64).reshape(-1)
        candidate = np.asarray(self.candidate, dtype=np.float64).reshape(-1)
        if reference.size == 0 or candidate.size == 0:
            raise EmptyInput("score pair is empty")
        if reference.shape != candidate.shape:
            raise ShapeMismatch(f"reference {reference.shape} vs candidate {candidate.shape}")
        if reference.size < 2:
            raise EmptyInput("score pair needs at least 2 samples")
        if not (np.all(np.isfinite(reference)) and np.all(np.isfinite(candidate))):
            raise ShapeMismatch("score pair contains non-finite values")
        object.__setattr__(self, "reference", reference)
        object.__setattr__(self, "candidate", candidate)

    def __len__(self) -> int:
        return self.reference.size


@dataclass(frozen=True)
class ClassWeights:
    """Per-class weights (empirical label frequencies), summing to one"""
    weights: np.ndarray
    counts: np.ndarray | None = None

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if np.any(weights < 0) or abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ShapeMismatch(f"class weights must be nonnegative and sum to 1, got {weights}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_labels(cls, labels: np.ndarray, n_classes: int) -> "ClassWeights":
        counts = np.bincount(np.asarray(labels, dtype=np.int64), minlength=n_classes)
        return cls(counts / counts.sum(), counts)

    def combine(self, classes: np.ndarray, scores) -> float:
        """Weighted mean of per-class scores over `classes`, renormalized to those classes"""
        # integer counts: all-ones scores combine to exactly 1.0
        mass = self.weights[classes] if self.counts is None else self.counts[classes].astype(np.float64)
        return float(np.dot(mass, np.asarray(scores, dtype=np.float64)) / mass.sum())


@dataclass
class RgCurve:
    """RG score per perturbation level; NaN marks a level that could not be scored"""
    levels: np.ndarray
    scores: np.ndarray
    area: float = field(init=False)

    def __post_init__(self):
        self.levels = np.asarray(self.levels, dtype=np.float64)
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.levels.shape != self.scores.shape:
            raise ShapeMismatch(f"levels {self.levels.shape} vs scores {self.scores.shape}")
        valid = np.isfinite(self.scores)
        # fewer than two scored levels leave the area undefined
        self.area = curve_area(self.levels[valid], self.scores[valid]) if valid.sum() >= 2 else float("nan")

    def to_dict(self) -> dict:
        return {
            "levels": [float(v) for v in self.levels],
            "scores": [float(v) if np.isfinite(v) else None for v in self.scores],
            "area": self.area if np.isfinite(self.area) else None,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RgCurve":
        scores = [np.nan if v is None else v for v in payload["scores"]]
        return cls(np.array(payload["levels"]), np.array(scores, dtype=np.float64))


class EmpiricalCdf:
    """Right-continuous step function F(u) = #{values <= u} / n"""

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise EmptyInput("ecdf of an empty sample")
        self.sorted_values = np.sort(values)
        self.n = values.size

    def __call__(self, u):
        counts = np.searchsorted(self.sorted_values, u, side="right")
        if np.ndim(counts) == 0:
            return float(counts) / self.n
        return counts / self.n


def ecdf(values: np.ndarray) -> EmpiricalCdf:
    return EmpiricalCdf(values)


def cvm_divergence(pair: ScorePair, p: int = 1) -> float:
    """(1/n) sum_i |F_Y(y_i) - F_Y'(y_i)|^p, integrating against the reference sample"""
    if p < 1:
        raise ValueError(f"order p must be a positive integer, got {p}")
    f_ref = ecdf(pair.reference)
    f_cand = ecdf(pair.candidate)
    gaps = np.abs(f_ref(pair.reference) - f_cand(pair.reference))
    return float(np.mean(gaps ** p))


def gini_index(values: np.ndarray) -> float:
    """Lorenz-curve Gini: sum_i (2i - n - 1) y_(i) / (n^2 mean)"""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise EmptyInput("gini of an empty sample")
    if np.any(values < 0):
        raise NonPositiveMean("gini index needs nonnegative values")
    mean = float(values.mean())
    if not mean > 0:
        raise NonPositiveMean(f"gini index needs a positive mean, got {mean}")
    n = values.size
    ranks = np.arange(1, n + 1)
    return float(np.sum((2 * ranks - n - 1) * np.sort(values)) / (n * n * mean))


def rg_cvm(pair: ScorePair) -> float:
    """RG_1 = 1 - CvM_1 / G(Y); the literal divergence form, kept for comparison"""
    return 1.0 - cvm_divergence(pair, 1) / gini_index(pair.reference)


def _tie_adjusted_reference(reference: np.ndarray, candidate: np.ndarray) -> np.ndarray:
    """Replace reference values inside each tied-candidate group by the group mean"""
    _, inverse, counts = np.unique(candidate, return_inverse=True, return_counts=True)
    if np.all(counts == 1):
        return reference
    groups = counts.size
    sums = np.bincount(inverse, weights=reference, minlength=groups)
    lows = np.full(groups, np.inf)
    highs = np.full(groups, -np.inf)
    np.minimum.at(lows, inverse, reference)
    np.maximum.at(highs, inverse, reference)
    constant = lows == highs
    means = sums / counts
    # groups whose reference is already constant keep their exact values
    return np.where(constant[inverse], reference, means[inverse])


def rg_score(pair: ScorePair) -> float:
    """
    Concordance estimator of RG in [0, 1]: 1 for a perfectly concordant
    candidate ranking, 0 for a reversed one, 0.5 for an uninformative one.
    """
    reference, candidate = pair.reference, pair.candidate
    if np.all(reference == reference[0]):
        raise ConstantReference("reference values are constant")

    adjusted = _tie_adjusted_reference(reference, candidate)
    order = np.argsort(candidate, kind="stable")
    concordance = np.cumsum(adjusted[order])
    ascending = np.cumsum(np.sort(reference))
    descending = np.cumsum(np.sort(reference)[::-1])

    numerator = float(np.sum(descending) - np.sum(concordance))
    denominator = float(np.sum(descending) - np.sum(ascending))
    if denominator <= 0:
        raise ConstantReference("dual Lorenz curves coincide")
    return float(np.clip(numerator / denominator, 0.0, 1.0))


def r_squared(pair: ScorePair) -> float:
    """1 - MSE / Var(Y), population variance"""
    variance = float(np.var(pair.reference))
    if variance == 0:
        raise ConstantReference("reference values are constant")
    mse = float(np.mean((pair.reference - pair.candidate) ** 2))
    return 1.0 - mse / variance


# --- multiclass one-vs-rest -------------------------------------------------

def _present_classes(labels: np.ndarray, n_classes: int) -> tuple[np.ndarray, ClassWeights]:
    counts = np.bincount(labels, minlength=n_classes)
    present = np.flatnonzero(counts)
    if present.size < 2:
        raise SingleClassSplit(f"only {present.size} class(es) present in the split")
    return present, ClassWeights.from_labels(labels, n_classes)


def _prepare(labels, *matrices: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if labels.size == 0:
        raise EmptyInput("no samples")
    prepared = []
    for matrix in matrices:
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != labels.size:
            raise ShapeMismatch(f"probability matrix {matrix.shape} does not match {labels.size} labels")
        prepared.append(matrix)
    shapes = {m.shape for m in prepared}
    if len(shapes) > 1:
        raise ShapeMismatch(f"probability matrices disagree in shape: {sorted(shapes)}")
    n_classes = prepared[0].shape[1]
    if labels.min() < 0 or labels.max() >= n_classes:
        raise ShapeMismatch(f"labels must lie in [0, {n_classes})")
    return labels, prepared


def rga_multiclass(labels, probs: np.ndarray) -> float:
    """One-vs-rest RGA, weighted by the empirical label frequencies of the split"""
    labels, (probs,) = _prepare(labels, probs)
    classes, weights = _present_classes(labels, probs.shape[1])
    scores = [rg_score(ScorePair((labels == c).astype(np.float64), probs[:, c])) for c in classes]
    return float(np.clip(weights.combine(classes, scores), 0.0, 1.0))


def _prediction_rg(labels, reference_probs: np.ndarray, candidate_probs: np.ndarray) -> float:
    labels, (reference_probs, candidate_probs) = _prepare(labels, reference_probs, candidate_probs)
    classes, weights = _present_classes(labels, reference_probs.shape[1])
    scores = [rg_score(ScorePair(reference_probs[:, c], candidate_probs[:, c])) for c in classes]
    return float(np.clip(weights.combine(classes, scores), 0.0, 1.0))


def rgr_score(probs_original: np.ndarray, probs_perturbed: np.ndarray, labels) -> float:
    """Robustness: original predictions as reference, perturbed predictions as candidate"""
    return _prediction_rg(labels, probs_original, probs_perturbed)


def rge_score(probs_full: np.ndarray, probs_reduced: np.ndarray, labels) -> float:
    """Explainability: full-feature predictions as reference, reduced-feature ones as candidate"""
    return _prediction_rg(labels, probs_full, probs_reduced)


# --- curve summaries --------------------------------------------------------

def curve_area(levels: np.ndarray, scores: np.ndarray) -> float:
    """Trapezoidal area under the curve divided by the level range"""
    levels = np.asarray(levels, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    if levels.size < 2 or levels.shape != scores.shape:
        raise DegenerateGrid(f"need >= 2 aligned levels, got {levels.size}")
    if np.any(np.diff(levels) <= 0):
        raise DegenerateGrid("levels must be strictly ascending")
    return float(np.trapezoid(scores, levels) / (levels[-1] - levels[0]))


def mean_curve(curves: list[RgCurve]) -> RgCurve:
    """Fold-averaged curve; a level missing in every fold stays missing"""
    if not curves:
        raise EmptyInput("no curves to average")
    levels = curves[0].levels
    for curve in curves[1:]:
        if not np.array_equal(curve.levels, levels):
            raise DegenerateGrid("curves use different level grids")
    stacked = np.vstack([c.scores for c in curves])
    valid = np.isfinite(stacked)
    counts = valid.sum(axis=0)
    totals = np.where(valid, stacked, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, totals / np.maximum(counts, 1), np.nan)
    return RgCurve(levels, means)
