"""
Quantum simulation package: dense statevector simulation of the amplitude-encoded
strongly entangling layer, with reverse-mode gradients.

Usage:
    from src.quantum import amplitude_encode, strongly_entangling_layer, pauli_z_expectations

    state = amplitude_encode(x, n_qubits=3)
    q = pauli_z_expectations(strongly_entangling_layer(state, params, CircuitLayout(3)))
"""

from .gradients import (
    CircuitTape,
    backward_from_tape,
    circuit_backward,
    circuit_expectations,
    circuit_forward,
    unitary_vjp,
)
from .simulator import (
    CircuitLayout,
    RotationParams,
    StateVector,
    amplitude_encode,
    apply_cnot,
    apply_rotation,
    pauli_z_expectations,
    rotation_matrix,
    strongly_entangling_layer,
)

__all__ = [
    'CircuitLayout',
    'CircuitTape',
    'RotationParams',
    'StateVector',
    'amplitude_encode',
    'apply_cnot',
    'apply_rotation',
    'backward_from_tape',
    'circuit_backward',
    'circuit_expectations',
    'circuit_forward',
    'pauli_z_expectations',
    'rotation_matrix',
    'strongly_entangling_layer',
    'unitary_vjp',
]
