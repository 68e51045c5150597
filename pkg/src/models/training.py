"""
Shared training loop (minibatch Adam on cross-entropy) and FGSM input attacks.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from ..base import Dataset, ModelKind
from ..base.errors import EmptyDataset, LabelOutOfRange, ModelError, NonDifferentiableModel
from ..log.logger import get_logger, log_performance
from .classifiers import Classifier, build_model
from .layers import cross_entropy
from .optim import AdamState, adam_step

log = get_logger(__name__)

LINEAR_L2_DEFAULT = 1e-3


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and schedule settings shared by every model kind"""
    learning_rate: float = 3e-3
    batch_size: int = 32
    epochs: int = 20
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    l2_strength: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ModelError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ModelError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 1:
            raise ModelError(f"epochs must be >= 1, got {self.epochs}")
        if self.l2_strength < 0:
            raise ModelError(f"l2_strength must be >= 0, got {self.l2_strength}")

    def to_dict(self) -> dict:
        return asdict(self)


def config_for_kind(config: TrainConfig, kind: ModelKind) -> TrainConfig:
    """QML and MLP train without L2; Linear falls back to LINEAR_L2_DEFAULT when unset"""
    if kind is ModelKind.LINEAR:
        return replace(config, l2_strength=config.l2_strength or LINEAR_L2_DEFAULT)
    return replace(config, l2_strength=0.0)


def _validate_training_set(train_set: Dataset) -> None:
    if train_set.n_samples == 0:
        raise EmptyDataset("training set is empty")
    labels = train_set.labels
    bad = np.flatnonzero((labels < 0) | (labels >= train_set.n_classes))
    if bad.size:
        raise LabelOutOfRange(int(labels[bad[0]]), row=int(bad[0]), n_classes=train_set.n_classes)


def batch_gradients(model: Classifier, features: np.ndarray, labels: np.ndarray,
                    l2_strength: float = 0.0) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy (+ 0.5 * l2 * |W|^2) and its gradient over a minibatch"""
    params = model.parameters()
    total = {name: np.zeros_like(p) for name, p in params.items()}
    loss = 0.0
    for x, y in zip(features, labels):
        probs, cache = model.forward(x)
        loss += cross_entropy(probs, int(y))
        grads, _ = model.backward(cache, int(y))
        for name, g in grads.items():
            total[name] += g
    count = len(labels)
    loss /= count
    for name in total:
        total[name] /= count
    if l2_strength > 0:
        for name in model.regularized_parameters():
            loss += 0.5 * l2_strength * float(np.sum(params[name] ** 2))
            total[name] += l2_strength * params[name]
    return loss, total


@log_performance
def train_model(kind: ModelKind, train_set: Dataset, config: TrainConfig) -> Classifier:
    """
    Train a freshly initialized model of `kind` with minibatch Adam.

    Initialization and the per-epoch shuffles all draw from one generator seeded
    with config.seed, so (kind, data, config) determines the result bit for bit.
    """
    _validate_training_set(train_set)
    rng = np.random.default_rng(config.seed)
    model = build_model(kind, train_set.n_features, train_set.n_classes, rng)
    params = model.parameters()
    state = AdamState.for_params(params)

    log.info(f"🚀 Training {kind.label} on {train_set!r} "
             f"({model.count_parameters()} parameters, {config.epochs} epochs)")

    n = train_set.n_samples
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            loss, grads = batch_gradients(
                model, train_set.features[batch], train_set.labels[batch], config.l2_strength
            )
            adam_step(params, grads, state, config)
            epoch_loss += loss * batch.size
        log.debug(f"📉 {kind.label} epoch {epoch + 1}/{config.epochs}: loss={epoch_loss / n:.6f}")

    train_accuracy = float(np.mean(model.predict_labels(train_set.features) == train_set.labels))
    log.success(f"✅ {kind.label} trained, training accuracy {train_accuracy:.4f}")
    return model


def fgsm_perturb(model: Classifier, features: np.ndarray, label: int, epsilon: float) -> np.ndarray:
    """x + epsilon * sign(d loss / d x), in standardized feature units (sign(0) = 0)"""
    if not getattr(model, "differentiable", False):
        raise NonDifferentiableModel(f"{type(model).__name__} has no input gradient")
    if epsilon < 0:
        raise ModelError(f"epsilon must be >= 0, got {epsilon}")
    features = np.asarray(features, dtype=np.float64)
    if epsilon == 0:
        return features.copy()
    return features + epsilon * np.sign(model.input_gradient(features, label))
