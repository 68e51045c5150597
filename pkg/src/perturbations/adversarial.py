"""FGSM sweeps in standardized feature space."""

from __future__ import annotations

import numpy as np

from ..base import Dataset
from ..base.errors import NonDifferentiableModel
from ..log.logger import get_logger
from ..metrics import RgCurve, rgr_score
from .grids import linear_grid, validate_grid

log = get_logger(__name__)

DEFAULT_EPSILONS = linear_grid(0.5, 0.05)


def fgsm_directions(model, features: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """sign(d loss / d x) per sample against its true label; shared by every epsilon"""
    if not getattr(model, "differentiable", False):
        raise NonDifferentiableModel(f"{type(model).__name__} has no input gradient")
    return np.vstack([np.sign(model.input_gradient(x, int(y))) for x, y in zip(features, labels)])


def rgr_fgsm_curve(model, test_set: Dataset, labels=None, epsilon_grid=DEFAULT_EPSILONS) -> RgCurve:
    """
    RGR under x + epsilon * sign(grad) for each epsilon. The same as calling
    fgsm_perturb per sample, with the gradient signs computed once.
    """
    epsilons = validate_grid(epsilon_grid, "fgsm epsilons")
    labels = test_set.labels if labels is None else np.asarray(labels)
    directions = fgsm_directions(model, test_set.features, labels)
    original = model.predict_proba(test_set.features)
    scores = []
    for epsilon in epsilons:
        if epsilon == 0:
            perturbed = test_set.features.copy()
        else:
            perturbed = test_set.features + epsilon * directions
        scores.append(rgr_score(original, model.predict_proba(perturbed), labels))
    curve = RgCurve(epsilons, np.array(scores))
    log.debug(f"⚔️ RGR FGSM curve for {model!r}: AURGR-FGSM={curve.area:.4f}")
    return curve
