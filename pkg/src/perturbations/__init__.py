"""
Stress conditions behind the SAFE curves: Gaussian feature noise, FGSM sweeps,
confidence-ranked sample removal and importance-ranked feature removal.
"""

from .adversarial import fgsm_directions, rgr_fgsm_curve
from .grids import CurveConfig, linear_grid, validate_grid
from .noise import NoiseGrid, gaussian_perturb, rgr_noise_curve
from .removal import (
    FeatureRanking,
    feature_importance_ranking,
    removal_count,
    remove_features,
    removed_feature_count,
    rga_removal_curve,
    rge_removal_curve,
)

__all__ = [
    'CurveConfig',
    'FeatureRanking',
    'NoiseGrid',
    'feature_importance_ranking',
    'fgsm_directions',
    'gaussian_perturb',
    'linear_grid',
    'removal_count',
    'remove_features',
    'removed_feature_count',
    'rga_removal_curve',
    'rge_removal_curve',
    'rgr_fgsm_curve',
    'rgr_noise_curve',
    'validate_grid',
]
