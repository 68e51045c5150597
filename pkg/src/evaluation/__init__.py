"""
Cross-validation harness: stratified folds, leakage-free standardization,
per-fold training and scoring, and mean ± std aggregation.
"""

from .experiment import (
    METRIC_NAMES,
    PROFILE_METRICS,
    SAFE_CURVES,
    ExperimentReport,
    FoldResult,
    aggregate,
    evaluate_model,
    run_experiment,
    run_fold,
    safe_profile,
)
from .folds import FoldPlan, Scaler, standardize, stratified_kfold

__all__ = [
    'ExperimentReport',
    'FoldPlan',
    'FoldResult',
    'METRIC_NAMES',
    'PROFILE_METRICS',
    'SAFE_CURVES',
    'Scaler',
    'aggregate',
    'evaluate_model',
    'run_experiment',
    'run_fold',
    'safe_profile',
    'standardize',
    'stratified_kfold',
]
