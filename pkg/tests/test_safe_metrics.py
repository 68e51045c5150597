"""
Rank-graduation metrics, their multiclass one-vs-rest forms and the
classical predictive metrics.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.base.errors import (
    ConstantReference,
    DegenerateGrid,
    EmptyInput,
    NonPositiveMean,
    ShapeMismatch,
    SingleClassSplit,
)
from src.metrics import (
    ClassWeights,
    RgCurve,
    ScorePair,
    accuracy,
    curve_area,
    cvm_divergence,
    ecdf,
    f1_macro,
    gini_index,
    mean_curve,
    mse_prob,
    predicted_labels,
    r_squared,
    rg_cvm,
    rg_score,
    rga_multiclass,
    rge_score,
    rgr_score,
)


def pairwise_auc(labels: np.ndarray, scores: np.ndarray) -> float:
    positives, negatives = scores[labels == 1], scores[labels == 0]
    wins = (positives[:, None] > negatives[None, :]).sum()
    ties = (positives[:, None] == negatives[None, :]).sum()
    return (wins + 0.5 * ties) / (positives.size * negatives.size)


# --- building blocks --------------------------------------------------------

def test_score_pair_validation():
    with pytest.raises(ShapeMismatch):
        ScorePair(np.arange(3), np.arange(4))
    with pytest.raises(EmptyInput):
        ScorePair(np.array([1.0]), np.array([1.0]))
    with pytest.raises(EmptyInput):
        ScorePair(np.array([]), np.array([]))
    with pytest.raises(ShapeMismatch):
        ScorePair(np.array([0.0, np.nan]), np.array([0.0, 1.0]))


def test_class_weights_from_labels():
    assert_allclose(ClassWeights.from_labels(np.array([0, 0, 1, 2]), 3).weights, [0.5, 0.25, 0.25])
    assert_allclose(ClassWeights.from_labels(np.array([1, 1]), 3).weights, [0.0, 1.0, 0.0])


def test_ecdf_examples():
    f = ecdf(np.array([1.0, 2.0, 3.0]))
    assert f(2.0) == pytest.approx(2 / 3)
    assert f(0.5) == 0.0
    assert f(3.0) == 1.0
    assert f(100.0) == 1.0
    assert ecdf(np.array([1.0, 1.0, 2.0]))(1.0) == pytest.approx(2 / 3)
    assert_allclose(f(np.array([0.0, 1.5, 3.5])), [0.0, 1 / 3, 1.0])


def test_cvm_divergence_examples():
    pair = ScorePair(np.array([0.0, 1.0]), np.array([10.0, 11.0]))
    assert cvm_divergence(pair, 1) == pytest.approx(0.75)
    assert cvm_divergence(pair, 2) <= cvm_divergence(pair, 1)
    same = np.array([0.3, 0.1, 0.7])
    assert cvm_divergence(ScorePair(same, same)) == 0.0


def test_gini_examples():
    assert gini_index(np.full(5, 2.0)) == pytest.approx(0.0, abs=1e-15)
    assert gini_index(np.array([0.0, 0.0, 0.0, 1.0])) == pytest.approx(0.75)
    assert gini_index(np.array([1.0, 2.0, 3.0])) == pytest.approx(4 / 18)
    assert gini_index(np.array([10.0, 20.0, 30.0])) == pytest.approx(4 / 18)


def test_gini_rejects_bad_input():
    with pytest.raises(NonPositiveMean):
        gini_index(np.zeros(3))
    with pytest.raises(NonPositiveMean):
        gini_index(np.array([-1.0, 2.0]))
    with pytest.raises(EmptyInput):
        gini_index(np.array([]))


# --- RG ---------------------------------------------------------------------

def test_rg_identity_and_inversion(rng):
    y = rng.standard_normal(50)
    assert rg_score(ScorePair(y, y)) == pytest.approx(1.0, abs=1e-12)
    assert rg_score(ScorePair(y, -y)) == pytest.approx(0.0, abs=1e-12)


def test_rg_matches_pairwise_auc_on_binary_reference(rng):
    for _ in range(200):
        n = int(rng.integers(2, 201))
        labels = rng.integers(0, 2, n)
        labels[0], labels[1] = 0, 1
        # a coarse candidate produces plenty of ties
        scores = rng.integers(0, 6, n).astype(np.float64) if rng.random() < 0.5 else rng.random(n)
        got = rg_score(ScorePair(labels.astype(np.float64), scores))
        assert abs(got - pairwise_auc(labels, scores)) < 1e-12


def test_rg_ignores_monotone_transforms(rng):
    y, candidate = rng.standard_normal(40), rng.standard_normal(40)
    base = rg_score(ScorePair(y, candidate))
    assert rg_score(ScorePair(y, np.exp(candidate))) == pytest.approx(base, abs=1e-12)
    assert rg_score(ScorePair(y, 3.0 * candidate + 1.0)) == pytest.approx(base, abs=1e-12)


def test_rg_fully_tied_candidate_is_one_half(rng):
    y = rng.standard_normal(30)
    assert rg_score(ScorePair(y, np.full(30, 0.2))) == pytest.approx(0.5, abs=1e-12)


def test_rg_constant_reference_raises():
    with pytest.raises(ConstantReference):
        rg_score(ScorePair(np.ones(4), np.arange(4.0)))


def test_rg_stays_in_unit_interval(rng):
    for _ in range(50):
        pair = ScorePair(rng.standard_normal(20), rng.standard_normal(20))
        assert 0.0 <= rg_score(pair) <= 1.0


def test_rg_cvm_on_identical_pair():
    y = np.array([1.0, 2.0, 4.0, 8.0])
    assert rg_cvm(ScorePair(y, y)) == pytest.approx(1.0)


def test_r_squared_examples():
    y = np.array([0.0, 1.0, 2.0])
    assert r_squared(ScorePair(y, y)) == 1.0
    assert r_squared(ScorePair(y, np.full(3, y.mean()))) == pytest.approx(0.0, abs=1e-12)
    assert r_squared(ScorePair(y, np.array([0.0, 1.0, 1.0]))) == pytest.approx(0.5)
    with pytest.raises(ConstantReference):
        r_squared(ScorePair(np.ones(3), y))


# --- multiclass -------------------------------------------------------------

HAND_LABELS = np.array([0, 0, 1, 1, 2, 2])
HAND_PROBS = np.array([
    [0.8, 0.1, 0.1],
    [0.4, 0.5, 0.1],
    [0.3, 0.6, 0.1],
    [0.5, 0.2, 0.3],
    [0.1, 0.2, 0.7],
    [0.2, 0.3, 0.5],
])


def test_rga_perfect_and_uniform():
    labels = np.array([0, 1, 2, 0, 1, 2])
    assert rga_multiclass(labels, np.eye(3)[labels]) == pytest.approx(1.0, abs=1e-12)
    assert rga_multiclass(labels, np.full((6, 3), 1 / 3)) == pytest.approx(0.5, abs=1e-12)


def test_rga_hand_example():
    # per-class AUCs 7/8, 11/16 (one tie) and 1, equal class weights
    assert rga_multiclass(HAND_LABELS, HAND_PROBS) == pytest.approx(41 / 48, abs=1e-12)


def test_rga_weights_follow_label_frequencies():
    labels = np.array([0, 0, 0, 1])
    probs = np.array([[0.9, 0.1], [0.2, 0.8], [0.7, 0.3], [0.4, 0.6]])
    # class 0 AUC 2/3, class 1 AUC 2/3
    assert rga_multiclass(labels, probs) == pytest.approx(2 / 3, abs=1e-12)


def test_rga_errors():
    with pytest.raises(SingleClassSplit):
        rga_multiclass(np.array([1, 1, 1]), np.full((3, 2), 0.5))
    with pytest.raises(ShapeMismatch):
        rga_multiclass(np.array([0, 1]), np.full((3, 2), 0.5))
    with pytest.raises(ShapeMismatch):
        rga_multiclass(np.array([0, 3]), np.full((2, 2), 0.5))
    with pytest.raises(EmptyInput):
        rga_multiclass(np.array([], dtype=int), np.zeros((0, 2)))


def test_rgr_identity_and_reversal(rng):
    labels = np.array([0, 1, 2] * 5)
    probs = rng.dirichlet(np.ones(3), size=15)
    assert rgr_score(probs, probs, labels) == pytest.approx(1.0, abs=1e-12)
    assert rgr_score(probs, 1.0 - probs, labels) == pytest.approx(0.0, abs=1e-12)


def test_rgr_hand_example():
    reference = np.array([[0.1, 0.9], [0.2, 0.8], [0.3, 0.7], [0.4, 0.6]])
    swapped = reference[[1, 0, 2, 3]]
    # one adjacent swap per class: (3.0 - 2.1) / (3.0 - 2.0) for class 0, likewise class 1
    assert rgr_score(reference, swapped, np.array([0, 1, 0, 1])) == pytest.approx(0.9, abs=1e-12)


def test_rge_identity_and_constant_reduction(rng):
    labels = np.array([0, 1, 2] * 4)
    full = rng.dirichlet(np.ones(3), size=12)
    assert rge_score(full, full, labels) == pytest.approx(1.0, abs=1e-12)
    constant = np.tile(np.array([0.2, 0.5, 0.3]), (12, 1))
    assert rge_score(full, constant, labels) == pytest.approx(0.5, abs=1e-12)


# --- curves -----------------------------------------------------------------

def test_curve_area_examples():
    assert curve_area(np.array([0.0, 0.5, 1.0]), np.full(3, 0.8)) == pytest.approx(0.8)
    assert curve_area(np.array([0.0, 1.0]), np.array([1.0, 0.0])) == pytest.approx(0.5)
    assert curve_area(np.array([0.0, 0.5, 1.0]), np.array([1.0, 0.8, 0.2])) == pytest.approx(0.70)
    # normalized by the level range, not the level count
    assert curve_area(np.array([0.0, 3.0]), np.array([1.0, 0.0])) == pytest.approx(0.5)


def test_curve_area_rejects_degenerate_grids():
    with pytest.raises(DegenerateGrid):
        curve_area(np.array([0.0]), np.array([1.0]))
    with pytest.raises(DegenerateGrid):
        curve_area(np.array([0.0, 0.5, 0.5]), np.ones(3))


def test_rg_curve_skips_missing_levels():
    curve = RgCurve(np.array([0.0, 0.5, 1.0]), np.array([1.0, np.nan, 0.0]))
    assert curve.area == pytest.approx(0.5)
    payload = curve.to_dict()
    assert payload["scores"] == [1.0, None, 0.0]
    restored = RgCurve.from_dict(payload)
    assert np.isnan(restored.scores[1])
    assert restored.area == curve.area


def test_mean_curve_is_nan_aware():
    levels = np.array([0.0, 0.5, 1.0])
    averaged = mean_curve([RgCurve(levels, np.array([1.0, np.nan, 0.5])),
                           RgCurve(levels, np.array([1.0, 0.6, np.nan]))])
    assert_allclose(averaged.scores, [1.0, 0.6, 0.5])
    with pytest.raises(DegenerateGrid):
        mean_curve([RgCurve(levels, np.ones(3)), RgCurve(levels * 2, np.ones(3))])
    with pytest.raises(EmptyInput):
        mean_curve([])


# --- predictive -------------------------------------------------------------

def test_predictive_metrics_on_perfect_predictions():
    labels = np.array([0, 1, 2, 1])
    probs = np.eye(3)[labels]
    assert accuracy(labels, predicted_labels(probs)) == 1.0
    assert f1_macro(labels, predicted_labels(probs)) == 1.0
    assert mse_prob(labels, probs) == 0.0


def test_predictive_hand_examples():
    labels = np.array([0, 0, 1, 1])
    predictions = np.zeros(4, dtype=int)
    assert accuracy(labels, predictions) == 0.5
    assert f1_macro(labels, predictions) == pytest.approx(1 / 3)
    assert mse_prob(np.array([0, 1, 2]), np.full((3, 3), 1 / 3)) == pytest.approx(2 / 3)


def test_predicted_labels_breaks_ties_low():
    assert predicted_labels(np.array([[0.5, 0.5], [0.2, 0.8]])).tolist() == [0, 1]


def test_predictive_errors():
    with pytest.raises(ShapeMismatch):
        accuracy(np.array([0, 1]), np.array([0]))
    with pytest.raises(EmptyInput):
        f1_macro(np.array([]), np.array([]))
    with pytest.raises(ShapeMismatch):
        mse_prob(np.array([0, 1]), np.ones((3, 2)))
