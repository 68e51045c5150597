"""
Classifiers compared in the experiments: the hybrid quantum model and the
MLP / Linear baselines. All share one interface so the training loop, FGSM and
the SAFE curves treat them alike.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import ceil, log2
from typing import Any

import numpy as np

from ..base import ModelKind
from ..base.errors import ShapeMismatch
from ..log.logger import get_logger
from ..quantum import CircuitLayout, CircuitTape, RotationParams, backward_from_tape, circuit_forward
from .layers import DenseLayer, OutputHead, PreLayer, gelu, gelu_grad, softmax

log = get_logger(__name__)


def qubits_for(n_features: int) -> int:
    """Smallest register whose 2^n amplitudes hold d features"""
    return max(1, ceil(log2(n_features)))


class Classifier(ABC):
    """Base class for every model kind"""

    kind: ModelKind
    differentiable: bool = True

    @property
    @abstractmethod
    def n_features(self) -> int:
        pass

    @property
    @abstractmethod
    def n_classes(self) -> int:
        pass

    @abstractmethod
    def parameters(self) -> dict[str, np.ndarray]:
        """Trainable arrays by name; the arrays are live references"""
        pass

    @abstractmethod
    def forward(self, features: np.ndarray) -> tuple[np.ndarray, Any]:
        """Class probabilities plus whatever the backward pass needs"""
        pass

    @abstractmethod
    def backward(self, cache: Any, label: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
        """Gradients of the cross-entropy w.r.t. every parameter and the input"""
        pass

    def regularized_parameters(self) -> tuple[str, ...]:
        """Names of arrays the L2 penalty applies to"""
        return ()

    def count_parameters(self) -> int:
        return int(sum(a.size for a in self.parameters().values()))

    def _check_features(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64).reshape(-1)
        if features.size != self.n_features:
            raise ShapeMismatch(f"{self.kind.label} expects {self.n_features} features, got {features.size}")
        return features

    def predict_proba(self, features_matrix: np.ndarray) -> np.ndarray:
        """Row-by-row inference over a samples x d matrix"""
        features_matrix = np.atleast_2d(np.asarray(features_matrix, dtype=np.float64))
        if features_matrix.shape[0] == 0:
            return np.zeros((0, self.n_classes))
        return np.vstack([self.forward(row)[0] for row in features_matrix])

    def predict_labels(self, features_matrix: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(features_matrix), axis=1)

    def input_gradient(self, features: np.ndarray, label: int) -> np.ndarray:
        probs, cache = self.forward(features)
        _, grad_input = self.backward(cache, label)
        return grad_input

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(d={self.n_features}, classes={self.n_classes}, "
                f"params={self.count_parameters()})")


def _logit_gradient(probs: np.ndarray, label: int) -> np.ndarray:
    grad = probs.copy()
    grad[label] -= 1.0
    return grad


# --- hybrid -----------------------------------------------------------------

@dataclass
class HybridCache:
    features: np.ndarray
    pre_activation: np.ndarray
    amplitudes: np.ndarray
    tape: CircuitTape
    expectations: np.ndarray
    probs: np.ndarray


class HybridModel(Classifier):
    """d -> Linear+GELU -> amplitude encoding -> VQC -> <Z> -> Linear -> softmax"""

    kind = ModelKind.QML

    def __init__(self, pre_layer: PreLayer, rotation_params: RotationParams,
                 layout: CircuitLayout, head: OutputHead):
        if pre_layer.out_features != 2 ** layout.n_qubits:
            raise ShapeMismatch(
                f"pre-layer width {pre_layer.out_features} != 2^{layout.n_qubits}"
            )
        if rotation_params.n_qubits != layout.n_qubits or head.in_features != layout.n_qubits:
            raise ShapeMismatch("rotation params, layout and head disagree on n_qubits")
        self.pre_layer = pre_layer
        self.rotation_params = rotation_params
        self.layout = layout
        self.head = head

    @classmethod
    def initialize(cls, n_features: int, n_classes: int, rng: np.random.Generator,
                   n_qubits: int | None = None) -> "HybridModel":
        n_qubits = n_qubits or qubits_for(n_features)
        pre_layer = PreLayer.initialize(rng, 2 ** n_qubits, n_features)
        angles = RotationParams(rng.uniform(0.0, 2.0 * np.pi, size=(n_qubits, 3)))
        head = OutputHead.initialize(rng, n_classes, n_qubits)
        return cls(pre_layer, angles, CircuitLayout(n_qubits), head)

    @property
    def n_features(self) -> int:
        return self.pre_layer.in_features

    @property
    def n_classes(self) -> int:
        return self.head.out_features

    @property
    def n_qubits(self) -> int:
        return self.layout.n_qubits

    def parameters(self) -> dict[str, np.ndarray]:
        return {
            "pre.weight": self.pre_layer.weight,
            "pre.bias": self.pre_layer.bias,
            "circuit.angles": self.rotation_params.angles,
            "head.weight": self.head.weight,
            "head.bias": self.head.bias,
        }

    def forward(self, features: np.ndarray) -> tuple[np.ndarray, HybridCache]:
        features = self._check_features(features)
        pre_activation = self.pre_layer(features)
        amplitudes = gelu(pre_activation)
        expectations, tape = circuit_forward(amplitudes, self.rotation_params, self.layout)
        probs = softmax(self.head(expectations))
        return probs, HybridCache(features, pre_activation, amplitudes, tape, expectations, probs)

    def backward(self, cache: HybridCache, label: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
        d_logits = _logit_gradient(cache.probs, label)
        g_head_w, g_head_b, d_expectations = self.head.backward(cache.expectations, d_logits)
        d_amplitudes, g_angles = backward_from_tape(cache.tape, d_expectations)
        d_pre = d_amplitudes * gelu_grad(cache.pre_activation)
        g_pre_w, g_pre_b, d_features = self.pre_layer.backward(cache.features, d_pre)
        grads = {
            "pre.weight": g_pre_w,
            "pre.bias": g_pre_b,
            "circuit.angles": g_angles,
            "head.weight": g_head_w,
            "head.bias": g_head_b,
        }
        return grads, d_features


# --- baselines --------------------------------------------------------------

@dataclass
class MlpCache:
    features: np.ndarray
    pre_activation: np.ndarray
    hidden: np.ndarray
    probs: np.ndarray


class MlpModel(Classifier):
    """One GELU hidden layer of width d; the classical mirror of the hybrid model"""

    kind = ModelKind.MLP

    def __init__(self, hidden: DenseLayer, output: DenseLayer):
        if output.in_features != hidden.out_features:
            raise ShapeMismatch("hidden and output layers disagree on width")
        self.hidden = hidden
        self.output = output

    @classmethod
    def initialize(cls, n_features: int, n_classes: int, rng: np.random.Generator) -> "MlpModel":
        hidden = DenseLayer.initialize(rng, n_features, n_features)
        output = DenseLayer.initialize(rng, n_classes, n_features)
        return cls(hidden, output)

    @property
    def n_features(self) -> int:
        return self.hidden.in_features

    @property
    def n_classes(self) -> int:
        return self.output.out_features

    def parameters(self) -> dict[str, np.ndarray]:
        return {
            "hidden.weight": self.hidden.weight,
            "hidden.bias": self.hidden.bias,
            "output.weight": self.output.weight,
            "output.bias": self.output.bias,
        }

    def forward(self, features: np.ndarray) -> tuple[np.ndarray, MlpCache]:
        features = self._check_features(features)
        pre_activation = self.hidden(features)
        hidden = gelu(pre_activation)
        probs = softmax(self.output(hidden))
        return probs, MlpCache(features, pre_activation, hidden, probs)

    def backward(self, cache: MlpCache, label: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
        d_logits = _logit_gradient(cache.probs, label)
        g_out_w, g_out_b, d_hidden = self.output.backward(cache.hidden, d_logits)
        d_pre = d_hidden * gelu_grad(cache.pre_activation)
        g_hid_w, g_hid_b, d_features = self.hidden.backward(cache.features, d_pre)
        grads = {
            "hidden.weight": g_hid_w,
            "hidden.bias": g_hid_b,
            "output.weight": g_out_w,
            "output.bias": g_out_b,
        }
        return grads, d_features


@dataclass
class LinearCache:
    features: np.ndarray
    probs: np.ndarray


class LinearModel(Classifier):
    """Multinomial logistic regression: softmax(W x + b)"""

    kind = ModelKind.LINEAR

    def __init__(self, layer: DenseLayer):
        self.layer = layer

    @classmethod
    def initialize(cls, n_features: int, n_classes: int, rng: np.random.Generator) -> "LinearModel":
        return cls(DenseLayer.initialize(rng, n_classes, n_features))

    @property
    def n_features(self) -> int:
        return self.layer.in_features

    @property
    def n_classes(self) -> int:
        return self.layer.out_features

    def parameters(self) -> dict[str, np.ndarray]:
        return {"linear.weight": self.layer.weight, "linear.bias": self.layer.bias}

    def regularized_parameters(self) -> tuple[str, ...]:
        return ("linear.weight",)

    def forward(self, features: np.ndarray) -> tuple[np.ndarray, LinearCache]:
        features = self._check_features(features)
        probs = softmax(self.layer(features))
        return probs, LinearCache(features, probs)

    def backward(self, cache: LinearCache, label: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
        d_logits = _logit_gradient(cache.probs, label)
        g_w, g_b, d_features = self.layer.backward(cache.features, d_logits)
        return {"linear.weight": g_w, "linear.bias": g_b}, d_features


MODEL_REGISTRY: dict[ModelKind, type[Classifier]] = {
    ModelKind.QML: HybridModel,
    ModelKind.MLP: MlpModel,
    ModelKind.LINEAR: LinearModel,
}


def build_model(kind: ModelKind, n_features: int, n_classes: int, rng: np.random.Generator) -> Classifier:
    """Seeded initialization: angles U[0, 2pi), weights U(+-1/sqrt(fan_in)), biases 0"""
    return MODEL_REGISTRY[kind].initialize(n_features, n_classes, rng)


def count_parameters(model: Classifier) -> int:
    return model.count_parameters()


# --- functional entry points ------------------------------------------------

def hybrid_forward(model: HybridModel, features: np.ndarray) -> tuple[np.ndarray, HybridCache]:
    return model.forward(features)


def hybrid_backward(model: HybridModel, cache: HybridCache, label: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
    return model.backward(cache, label)


def mlp_forward(model: MlpModel, features: np.ndarray) -> np.ndarray:
    return model.forward(features)[0]


def linear_forward(model: LinearModel, features: np.ndarray) -> np.ndarray:
    return model.forward(features)[0]
