"""Adam with bias correction over named parameter arrays."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..base.errors import ShapeMismatch


@dataclass
class AdamState:
    """First/second moment estimates per parameter name plus the step counter"""
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0

    @classmethod
    def for_params(cls, params: dict[str, np.ndarray]) -> "AdamState":
        return cls(
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
        )


def adam_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray], state: AdamState,
              config) -> tuple[dict[str, np.ndarray], AdamState]:
    """
    One Adam update, applied in place to the parameter arrays.

    `config` supplies learning_rate, adam_beta1, adam_beta2 and adam_epsilon
    (a TrainConfig). Returns the same parameter dict and the advanced state.
    """
    if set(params) != set(grads):
        raise ShapeMismatch(f"parameter names {sorted(params)} != gradient names {sorted(grads)}")
    for name, p in params.items():
        if grads[name].shape != p.shape:
            raise ShapeMismatch(f"{name}: gradient shape {grads[name].shape} != parameter shape {p.shape}")
        if name in state.m and state.m[name].shape != p.shape:
            raise ShapeMismatch(f"{name}: optimizer state shape {state.m[name].shape} != {p.shape}")

    beta1, beta2 = config.adam_beta1, config.adam_beta2
    state.t += 1
    bc1 = 1.0 - beta1 ** state.t
    bc2 = 1.0 - beta2 ** state.t

    for name, p in params.items():
        g = grads[name]
        if name not in state.m:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)
        state.m[name] = beta1 * state.m[name] + (1.0 - beta1) * g
        state.v[name] = beta2 * state.v[name] + (1.0 - beta2) * (g * g)
        m_hat = state.m[name] / bc1
        v_hat = state.v[name] / bc2
        p -= config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_epsilon)

    return params, state
