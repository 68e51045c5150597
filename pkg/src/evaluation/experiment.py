"""
Cross-validated SAFE experiments.

One fold = standardize on its training split, train every requested model kind,
score the validation split (predictive metrics plus RGA) and, when a curve
configuration is given, sweep the four SAFE curves. Folds are independent and
seeded by fold index, so they can run on a process pool without changing results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np
import pandas as pd

from ..base import Dataset, ModelKind, derive_seed
from ..base.errors import ConfigError, FoldFailure
from ..log.logger import get_logger, log_fold_event, log_performance
from ..metrics import (
    RgCurve,
    accuracy,
    f1_macro,
    mean_curve,
    mse_prob,
    predicted_labels,
    rga_multiclass,
)
from ..models import Classifier, TrainConfig, config_for_kind, train_model
from ..perturbations import (
    CurveConfig,
    FeatureRanking,
    NoiseGrid,
    feature_importance_ranking,
    rga_removal_curve,
    rge_removal_curve,
    rgr_fgsm_curve,
    rgr_noise_curve,
)
from .folds import FoldPlan, standardize, stratified_kfold

log = get_logger(__name__)

SAFE_CURVES = {
    'rga': {
        'name': 'RGA sample removal',
        'metric': 'aurga',
        'description': 'Most confident validation samples removed first',
        'needs_gradient': False,
    },
    'noise': {
        'name': 'RGR Gaussian noise',
        'metric': 'aurgr_noise',
        'description': 'Per-feature Gaussian noise scaled by the validation std',
        'needs_gradient': False,
    },
    'fgsm': {
        'name': 'RGR FGSM',
        'metric': 'aurgr_fgsm',
        'description': 'Fast gradient sign attack in standardized units',
        'needs_gradient': True,
    },
    'rge': {
        'name': 'RGE feature removal',
        'metric': 'aurge',
        'description': 'Top-ranked features set to the training mean',
        'needs_gradient': False,
    },
}

PREDICTIVE_METRICS = ("f1_macro", "accuracy", "mse", "rga")
METRIC_NAMES = PREDICTIVE_METRICS + tuple(info['metric'] for info in SAFE_CURVES.values())
PROFILE_METRICS = ("f1_macro", "rga", "aurga", "aurgr_noise", "aurgr_fgsm", "aurge")

# derive_seed key of the noise draws inside a fold; shared by every kind
NOISE_STREAM = 1


@dataclass
class FoldResult:
    """Metrics (and curves, when swept) of one model kind on one fold"""
    fold: int
    kind: ModelKind
    metrics: dict[str, float | None]
    curves: dict[str, RgCurve] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "fold": self.fold,
            "kind": self.kind.value,
            "metrics": {name: self.metrics.get(name) for name in METRIC_NAMES},
            "curves": {variant: curve.to_dict() for variant, curve in self.curves.items()},
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FoldResult":
        return cls(
            fold=int(payload["fold"]),
            kind=ModelKind(payload["kind"]),
            metrics=dict(payload["metrics"]),
            curves={v: RgCurve.from_dict(c) for v, c in payload.get("curves", {}).items()},
        )


@dataclass
class ExperimentReport:
    """Per-fold rows ordered by (kind, fold), their mean/std aggregates and the SAFE profile"""
    kinds: tuple[ModelKind, ...]
    k: int
    seed: int
    results: list[FoldResult]
    aggregates: dict[str, dict[str, dict[str, float]]]
    profile: dict[str, dict[str, float]] = field(default_factory=dict)
    config_hash: str | None = None

    def fold_results(self, kind: ModelKind) -> list[FoldResult]:
        return [r for r in self.results if r.kind is kind]

    def to_frame(self) -> pd.DataFrame:
        rows = [{"kind": r.kind.value, "fold": r.fold, **r.metrics} for r in self.results]
        return pd.DataFrame(rows, columns=["kind", "fold", *METRIC_NAMES])

    def mean_curves(self) -> dict[tuple[ModelKind, str], RgCurve]:
        """Fold-averaged curve per (kind, variant)"""
        means = {}
        for kind in self.kinds:
            rows = self.fold_results(kind)
            for variant in SAFE_CURVES:
                curves = [r.curves[variant] for r in rows if variant in r.curves]
                if curves:
                    means[(kind, variant)] = mean_curve(curves)
        return means

    def to_dict(self) -> dict:
        return {
            "provenance": {
                "seed": self.seed,
                "config_hash": self.config_hash,
                "folds": self.k,
                "kinds": [kind.value for kind in self.kinds],
            },
            "folds": [r.to_dict() for r in self.results],
            "aggregates": self.aggregates,
            "profile": self.profile,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentReport":
        provenance = payload["provenance"]
        return cls(
            kinds=tuple(ModelKind(k) for k in provenance["kinds"]),
            k=int(provenance["folds"]),
            seed=int(provenance["seed"]),
            results=[FoldResult.from_dict(r) for r in payload["folds"]],
            aggregates=payload["aggregates"],
            profile=payload.get("profile", {}),
            config_hash=provenance.get("config_hash"),
        )


def evaluate_model(model: Classifier, test_set: Dataset, fold: int, curve_config: CurveConfig | None = None,
                   ranking: FeatureRanking | None = None, noise_grid: NoiseGrid | None = None,
                   noise_seed: int = 0) -> FoldResult:
    """Score a trained model on a validation split; curves only when curve_config is given"""
    probs = model.predict_proba(test_set.features)
    labels = test_set.labels
    metrics: dict[str, float | None] = {
        "f1_macro": f1_macro(labels, predicted_labels(probs)),
        "accuracy": accuracy(labels, predicted_labels(probs)),
        "mse": mse_prob(labels, probs),
        "rga": rga_multiclass(labels, probs),
    }
    metrics.update({info['metric']: None for info in SAFE_CURVES.values()})
    result = FoldResult(fold, model.kind, metrics)
    if curve_config is None:
        return result

    curves = {
        'rga': rga_removal_curve(probs, labels, curve_config.rga_fractions),
        'noise': rgr_noise_curve(model, test_set, noise_grid, labels, seed=noise_seed),
        'rge': rge_removal_curve(model, test_set, ranking, labels, curve_config.rge_fractions),
    }
    if model.differentiable:
        curves['fgsm'] = rgr_fgsm_curve(model, test_set, labels, curve_config.fgsm_epsilons)
    for variant in SAFE_CURVES:
        if variant in curves:
            result.curves[variant] = curves[variant]
            area = curves[variant].area
            metrics[SAFE_CURVES[variant]['metric']] = area if np.isfinite(area) else None
    return result


def _run_fold(dataset: Dataset, plan: FoldPlan, fold: int, kinds: tuple[ModelKind, ...],
              train_config: TrainConfig, curve_config: CurveConfig | None, seed: int) -> list[FoldResult]:
    fold_seed = derive_seed(seed, fold)
    train_idx, test_idx = plan.train_indices(fold), plan.test_indices(fold)
    train_x, test_x, _ = standardize(dataset.features[train_idx], dataset.features[test_idx])
    train_set = Dataset(train_x, dataset.labels[train_idx], dataset.n_classes)
    test_set = Dataset(test_x, dataset.labels[test_idx], dataset.n_classes)
    base_config = replace(train_config, seed=fold_seed)

    ranking = noise_grid = None
    if curve_config is not None:
        ranking = feature_importance_ranking(train_set, base_config, curve_config.ranking_l2)
        noise_grid = NoiseGrid.from_features(test_set.features, curve_config.noise_multipliers)

    results = []
    for kind in kinds:
        log_fold_event(fold, kind.label, f"training on {train_set.n_samples} samples", level="DEBUG")
        model = train_model(kind, train_set, config_for_kind(base_config, kind))
        result = evaluate_model(model, test_set, fold, curve_config, ranking, noise_grid,
                                noise_seed=derive_seed(fold_seed, NOISE_STREAM))
        log_fold_event(fold, kind.label, f"F1-macro={result.metrics['f1_macro']:.4f} "
                       f"RGA={result.metrics['rga']:.4f}", level="SUCCESS")
        results.append(result)
    return results


def run_fold(dataset: Dataset, plan: FoldPlan, fold: int, kinds: Iterable[ModelKind],
             train_config: TrainConfig, curve_config: CurveConfig | None = None,
             seed: int = 0) -> list[FoldResult]:
    """
    Execute one fold in isolation. Uses the same derived seed as inside
    run_experiment, so its rows match the full report. Any failure is
    re-raised as FoldFailure carrying the fold index.
    """
    try:
        return _run_fold(dataset, plan, fold, tuple(kinds), train_config, curve_config, seed)
    except FoldFailure:
        raise
    except Exception as e:
        log_fold_event(fold, "-", f"failed: {type(e).__name__}: {e}", level="ERROR")
        raise FoldFailure(fold, e) from e


def aggregate(results: list[FoldResult], kinds: Iterable[ModelKind]) -> dict[str, dict[str, dict[str, float]]]:
    """Mean and sample (k-1) standard deviation of every metric per kind; all-missing metrics are left out"""
    frame = pd.DataFrame(
        [{"kind": r.kind.value, **{m: r.metrics.get(m) for m in METRIC_NAMES}} for r in results],
        columns=["kind", *METRIC_NAMES],
    )
    frame[list(METRIC_NAMES)] = frame[list(METRIC_NAMES)].apply(pd.to_numeric, errors="coerce")
    grouped = frame.groupby("kind", sort=False)
    means, stds = grouped.mean(), grouped.std(ddof=1)

    aggregates = {}
    for kind in kinds:
        if kind.value not in means.index:
            continue
        entry = {}
        for metric in METRIC_NAMES:
            mean = means.at[kind.value, metric]
            if pd.isna(mean):
                continue
            std = stds.at[kind.value, metric]
            entry[metric] = {"mean": float(mean), "std": float(std) if not pd.isna(std) else 0.0}
        aggregates[kind.value] = entry
    return aggregates


def safe_profile(aggregates: dict[str, dict[str, dict[str, float]]]) -> dict[str, dict[str, float]]:
    """
    Radar summary: min-max normalize each metric's fold mean across kinds.
    All kinds get 1.0 when a metric ties.
    """
    profile: dict[str, dict[str, float]] = {kind: {} for kind in aggregates}
    for metric in PROFILE_METRICS:
        values = {kind: entry[metric]["mean"] for kind, entry in aggregates.items() if metric in entry}
        if not values:
            continue
        low, high = min(values.values()), max(values.values())
        for kind, value in values.items():
            profile[kind][metric] = 1.0 if high == low else (value - low) / (high - low)
    return profile


@log_performance
def run_experiment(dataset: Dataset, model_kinds: Iterable[ModelKind], train_config: TrainConfig,
                   curve_config: CurveConfig | None = None, seed: int = 0, folds: int = 5,
                   workers: int = 1, config_hash: str | None = None) -> ExperimentReport:
    """
    Stratified k-fold experiment over every requested kind.

    Without a curve configuration only the predictive metrics and RGA are
    computed. With workers > 1 folds run on a process pool; the report is the
    same either way.
    """
    kinds = tuple(dict.fromkeys(model_kinds))
    if not kinds:
        raise ConfigError("no model kinds requested")
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    plan = stratified_kfold(dataset.labels, folds, seed)
    mode = "predictive + curves" if curve_config is not None else "predictive"
    log.info(f"🚀 Running {folds}-fold experiment ({mode}) for {[k.label for k in kinds]} on {dataset!r}")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, folds)) as pool:
            futures = [
                pool.submit(run_fold, dataset, plan, fold, kinds, train_config, curve_config, seed)
                for fold in range(folds)
            ]
            per_fold = [future.result() for future in futures]
    else:
        per_fold = [run_fold(dataset, plan, fold, kinds, train_config, curve_config, seed)
                    for fold in range(folds)]

    order = {kind: i for i, kind in enumerate(kinds)}
    results = sorted((r for rows in per_fold for r in rows), key=lambda r: (order[r.kind], r.fold))
    aggregates = aggregate(results, kinds)
    report = ExperimentReport(kinds, folds, seed, results, aggregates, safe_profile(aggregates), config_hash)

    for kind in kinds:
        f1 = aggregates[kind.value]["f1_macro"]
        log.success(f"✅ {kind.label}: F1-macro {f1['mean']:.4f} ± {f1['std']:.4f}")
    return report
