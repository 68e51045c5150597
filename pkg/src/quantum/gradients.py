"""
Reverse-mode differentiation through the simulated circuit.

Cotangents of the complex state use the convention dL = Re(<G, dpsi>), so a
cotangent travels backwards through a unitary U as U^dagger G and keeps its norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..base.errors import InvalidRotationParams, ShapeMismatch
from .simulator import (
    CircuitLayout,
    RotationParams,
    _apply_1q,
    _apply_cnot,
    _z_signs,
    amplitude_encode,
    pauli_z_expectations,
    rotation_derivatives,
    rotation_matrix,
    strongly_entangling_layer,
)


@dataclass
class CircuitTape:
    """Forward activations needed for an exact backward pass"""
    input_size: int
    input_norm: float
    encoded: np.ndarray          # real, length 2^n
    layer_inputs: list[np.ndarray]  # tensor before each rotation, in qubit order
    output: np.ndarray           # final state tensor
    params: RotationParams
    layout: CircuitLayout
    expectations: np.ndarray


def _layout_for(params: RotationParams, layout: CircuitLayout | None) -> CircuitLayout:
    if layout is None:
        return CircuitLayout(params.n_qubits)
    if layout.n_qubits != params.n_qubits:
        raise InvalidRotationParams(
            f"layout has {layout.n_qubits} qubits but params have {params.n_qubits}"
        )
    return layout


def circuit_forward(
    input_amplitudes: np.ndarray,
    params: RotationParams,
    layout: CircuitLayout | None = None,
) -> tuple[np.ndarray, CircuitTape]:
    """x -> encode -> strongly entangling layer -> <Z>, recording a tape"""
    layout = _layout_for(params, layout)
    n = params.n_qubits
    x = np.asarray(input_amplitudes, dtype=np.float64).reshape(-1)
    state = amplitude_encode(x, n)

    tensor = state.tensor()
    layer_inputs = []
    for qubit, (alpha, beta, gamma) in enumerate(params.angles):
        layer_inputs.append(tensor)
        tensor = _apply_1q(tensor, rotation_matrix(alpha, beta, gamma), qubit)
    for control, target in layout.cnot_pairs():
        tensor = _apply_cnot(tensor, control, target)

    probabilities = np.abs(tensor.reshape(-1)) ** 2
    expectations = np.clip(_z_signs(n) @ probabilities, -1.0, 1.0)
    tape = CircuitTape(
        input_size=x.size,
        input_norm=float(np.linalg.norm(x)),
        encoded=state.amplitudes.real.copy(),
        layer_inputs=layer_inputs,
        output=tensor,
        params=params,
        layout=layout,
        expectations=expectations,
    )
    return expectations, tape


def unitary_vjp(
    cotangent: np.ndarray,
    params: RotationParams,
    layout: CircuitLayout | None = None,
) -> np.ndarray:
    """
    Pull a state cotangent back through the rotations and CNOT ring only
    (no encoding, no readout). The Euclidean norm is unchanged.
    """
    layout = _layout_for(params, layout)
    n = params.n_qubits
    grad = np.asarray(cotangent, dtype=np.complex128).reshape([2] * n)
    for control, target in reversed(layout.cnot_pairs()):
        grad = _apply_cnot(grad, control, target)
    for qubit in reversed(range(n)):
        alpha, beta, gamma = params.angles[qubit]
        grad = _apply_1q(grad, rotation_matrix(alpha, beta, gamma).conj().T, qubit)
    return grad.reshape(-1)


def backward_from_tape(tape: CircuitTape, upstream_grad: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of <upstream, q> w.r.t. the raw input vector and the rotation angles"""
    n = tape.params.n_qubits
    upstream = np.asarray(upstream_grad, dtype=np.float64).reshape(-1)
    if upstream.size != n:
        raise ShapeMismatch(f"upstream gradient has {upstream.size} entries, expected {n}")

    weights = upstream @ _z_signs(n)
    grad = (2.0 * weights).reshape([2] * n) * tape.output

    for control, target in reversed(tape.layout.cnot_pairs()):
        grad = _apply_cnot(grad, control, target)

    grad_params = np.zeros((n, 3))
    for qubit in reversed(range(n)):
        alpha, beta, gamma = tape.params.angles[qubit]
        before = tape.layer_inputs[qubit]
        for j, derivative in enumerate(rotation_derivatives(alpha, beta, gamma)):
            moved = _apply_1q(before, derivative, qubit)
            grad_params[qubit, j] = float(np.real(np.vdot(grad, moved)))
        grad = _apply_1q(grad, rotation_matrix(alpha, beta, gamma).conj().T, qubit)

    # normalization x -> x / |x| has Jacobian (I - psi psi^T) / |x|
    grad_encoded = np.real(grad).reshape(-1)
    psi0 = tape.encoded
    grad_input = (grad_encoded - psi0 * float(psi0 @ grad_encoded)) / tape.input_norm
    return grad_input[: tape.input_size], grad_params


def circuit_backward(
    input_amplitudes: np.ndarray,
    params: RotationParams,
    upstream_grad: np.ndarray,
    layout: CircuitLayout | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    _, tape = circuit_forward(input_amplitudes, params, layout)
    return backward_from_tape(tape, upstream_grad)


def circuit_expectations(
    input_amplitudes: np.ndarray,
    params: RotationParams,
    layout: CircuitLayout | None = None,
) -> np.ndarray:
    """Validated (StateVector-level) forward pass, used as the reference path"""
    layout = _layout_for(params, layout)
    state = amplitude_encode(input_amplitudes, params.n_qubits)
    return pauli_z_expectations(strongly_entangling_layer(state, params, layout))
