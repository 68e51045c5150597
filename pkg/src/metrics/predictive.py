"""Classical predictive metrics: accuracy, macro-averaged F1 and probability MSE."""

from __future__ import annotations

import numpy as np

from ..base.errors import EmptyInput, ShapeMismatch


def predicted_labels(probs: np.ndarray) -> np.ndarray:
    """Row-wise argmax; the lowest class index wins ties"""
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 2 or probs.shape[0] == 0:
        raise EmptyInput("no probability rows")
    return np.argmax(probs, axis=1)


def _aligned(labels, predictions) -> tuple[np.ndarray, np.ndarray]:
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    predictions = np.asarray(predictions, dtype=np.int64).reshape(-1)
    if labels.size == 0:
        raise EmptyInput("no labels")
    if labels.shape != predictions.shape:
        raise ShapeMismatch(f"labels {labels.shape} vs predictions {predictions.shape}")
    return labels, predictions


def accuracy(labels, predictions) -> float:
    labels, predictions = _aligned(labels, predictions)
    return float(np.mean(labels == predictions))


def f1_macro(labels, predictions) -> float:
    """
    Per-class F1 averaged uniformly over the classes present in `labels`.
    A class with precision + recall = 0 contributes 0.
    """
    labels, predictions = _aligned(labels, predictions)
    scores = []
    for c in np.unique(labels):
        tp = np.sum((predictions == c) & (labels == c))
        fp = np.sum((predictions == c) & (labels != c))
        fn = np.sum((predictions != c) & (labels == c))
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        if precision + recall == 0:
            scores.append(0.0)
        else:
            scores.append(2 * precision * recall / (precision + recall))
    return float(np.mean(scores))


def mse_prob(labels, probs: np.ndarray) -> float:
    """(1/n) sum_i ||p_i - onehot(y_i)||^2"""
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    probs = np.asarray(probs, dtype=np.float64)
    if labels.size == 0:
        raise EmptyInput("no labels")
    if probs.ndim != 2 or probs.shape[0] != labels.size:
        raise ShapeMismatch(f"probability matrix {probs.shape} does not match {labels.size} labels")
    onehot = np.eye(probs.shape[1])[labels]
    return float(np.mean(np.sum((probs - onehot) ** 2, axis=1)))
