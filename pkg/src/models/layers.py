"""Classical building blocks shared by the hybrid model and the baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..base.errors import ShapeMismatch

SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)
GELU_CUBIC = 0.044715
PROB_FLOOR = 1e-12


def gelu(x):
    """GELU, tanh approximation: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3)))"""
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * x * (1.0 + np.tanh(SQRT_2_OVER_PI * (x + GELU_CUBIC * x ** 3)))


def gelu_grad(x):
    x = np.asarray(x, dtype=np.float64)
    inner = SQRT_2_OVER_PI * (x + GELU_CUBIC * x ** 3)
    t = np.tanh(inner)
    d_inner = SQRT_2_OVER_PI * (1.0 + 3.0 * GELU_CUBIC * x ** 2)
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t ** 2) * d_inner


def softmax(logits: np.ndarray) -> np.ndarray:
    """Max-shifted softmax over the last axis"""
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def cross_entropy(probs: np.ndarray, label: int) -> float:
    """-log p[label] with p clamped below at 1e-12"""
    return float(-np.log(max(float(probs[label]), PROB_FLOOR)))


def uniform_init(rng: np.random.Generator, fan_out: int, fan_in: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=(fan_out, fan_in))


@dataclass
class DenseLayer:
    """Affine map y = W x + b"""
    weight: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ShapeMismatch(
                f"{type(self).__name__}: weight {self.weight.shape} incompatible with bias {self.bias.shape}"
            )

    @classmethod
    def initialize(cls, rng: np.random.Generator, fan_out: int, fan_in: int):
        return cls(uniform_init(rng, fan_out, fan_in), np.zeros(fan_out))

    @property
    def in_features(self) -> int:
        return self.weight.shape[1]

    @property
    def out_features(self) -> int:
        return self.weight.shape[0]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.weight @ x + self.bias

    def backward(self, x: np.ndarray, grad_out: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(grad_weight, grad_bias, grad_input) for upstream grad_out"""
        return np.outer(grad_out, x), grad_out.copy(), self.weight.T @ grad_out

    @property
    def size(self) -> int:
        return self.weight.size + self.bias.size


class PreLayer(DenseLayer):
    """Pre-VQC map d -> 2^n_qubits, followed by GELU in the hybrid forward pass"""


class OutputHead(DenseLayer):
    """Class logits from the n_qubits Pauli-Z readouts"""

    def __post_init__(self):
        super().__post_init__()
        if self.weight.shape[0] < 2:
            raise ShapeMismatch(f"output head needs >= 2 classes, got {self.weight.shape[0]}")
