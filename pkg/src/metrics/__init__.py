"""
SAFE metrics: the rank-graduation family (RGA / RGR / RGE), its CvM and Gini
building blocks, curve summaries and the classical predictive scores.
"""

from .predictive import accuracy, f1_macro, mse_prob, predicted_labels
from .rank_graduation import (
    ClassWeights,
    EmpiricalCdf,
    RgCurve,
    ScorePair,
    curve_area,
    cvm_divergence,
    ecdf,
    gini_index,
    mean_curve,
    r_squared,
    rg_cvm,
    rg_score,
    rga_multiclass,
    rge_score,
    rgr_score,
)

__all__ = [
    'ClassWeights',
    'EmpiricalCdf',
    'RgCurve',
    'ScorePair',
    'accuracy',
    'curve_area',
    'cvm_divergence',
    'ecdf',
    'f1_macro',
    'gini_index',
    'mean_curve',
    'mse_prob',
    'predicted_labels',
    'r_squared',
    'rg_cvm',
    'rg_score',
    'rga_multiclass',
    'rge_score',
    'rgr_score',
]
