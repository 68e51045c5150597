"""
Dense statevector simulator for the variational circuit.

Conventions (all tests are pinned to them):
- qubit 0 is the most significant bit of the basis index, so the amplitude
  array reshaped to [2] * n has qubit i on axis i;
- R(alpha, beta, gamma) = RZ(gamma) @ RY(beta) @ RZ(alpha);
- the entangler is a ring of CNOT(i, (i + r) mod n), applied in ascending i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, sin

import numpy as np

from ..base.errors import (
    ControlEqualsTarget,
    DimensionOverflow,
    InvalidRotationParams,
    InvalidStateVector,
    QubitOutOfRange,
    ZeroVector,
)
from ..log.logger import get_logger

log = get_logger(__name__)

NORM_TOLERANCE = 1e-10
ZERO_NORM_THRESHOLD = 1e-30
MSB_FIRST = "qubit0-msb"


@dataclass(frozen=True)
class StateVector:
    """Pure n-qubit state |psi> as a complex amplitude array of length 2^n"""
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidStateVector(f"n_qubits must be positive, got {self.n_qubits}")
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != 2 ** self.n_qubits:
            raise InvalidStateVector(
                f"expected {2 ** self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amplitudes.size}"
            )
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidStateVector(f"state is not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "StateVector":
        amplitudes = np.zeros(2 ** n_qubits, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(n_qubits, amplitudes)

    def tensor(self) -> np.ndarray:
        """Amplitudes viewed with one axis per qubit"""
        return self.amplitudes.reshape([2] * self.n_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class RotationParams:
    """Per-qubit rotation triples (alpha_i, beta_i, gamma_i), radians"""
    angles: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=np.float64)
        if angles.ndim != 2 or angles.shape[1] != 3 or angles.shape[0] < 1:
            raise InvalidRotationParams(f"angles must have shape (n_qubits, 3), got {angles.shape}")
        if not np.all(np.isfinite(angles)):
            raise InvalidRotationParams("angles must be finite")
        self.angles = angles

    @property
    def n_qubits(self) -> int:
        return self.angles.shape[0]

    @classmethod
    def zeros(cls, n_qubits: int) -> "RotationParams":
        return cls(np.zeros((n_qubits, 3)))


@dataclass(frozen=True)
class CircuitLayout:
    """Wiring conventions of the strongly entangling layer"""
    n_qubits: int
    entangler_range: int = 1
    bit_convention: str = field(default=MSB_FIRST)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidStateVector(f"n_qubits must be positive, got {self.n_qubits}")
        if self.entangler_range < 1:
            raise ControlEqualsTarget("entangler_range must be positive")
        if self.n_qubits > 1 and self.entangler_range >= self.n_qubits:
            raise ControlEqualsTarget(
                f"entangler_range {self.entangler_range} must be < n_qubits {self.n_qubits}"
            )
        if self.bit_convention != MSB_FIRST:
            raise InvalidStateVector(f"unsupported bit convention {self.bit_convention!r}")

    def cnot_pairs(self) -> list[tuple[int, int]]:
        """(control, target) pairs of the entangling ring, in application order"""
        if self.n_qubits == 1:
            return []
        return [(i, (i + self.entangler_range) % self.n_qubits) for i in range(self.n_qubits)]


# --- gate matrices ----------------------------------------------------------

def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]], dtype=np.complex128)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rotation_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """R(alpha, beta, gamma) = RZ(gamma) RY(beta) RZ(alpha)"""
    return rz_matrix(gamma) @ ry_matrix(beta) @ rz_matrix(alpha)


def rotation_derivatives(alpha: float, beta: float, gamma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Partial derivatives of R with respect to alpha, beta and gamma"""
    rz_a, ry_b, rz_g = rz_matrix(alpha), ry_matrix(beta), rz_matrix(gamma)
    half_z = np.diag([-0.5j, 0.5j])
    c, s = cos(beta / 2), sin(beta / 2)
    d_ry = 0.5 * np.array([[-s, -c], [c, -s]], dtype=np.complex128)
    d_alpha = rz_g @ ry_b @ (half_z @ rz_a)
    d_beta = rz_g @ d_ry @ rz_a
    d_gamma = (half_z @ rz_g) @ ry_b @ rz_a
    return d_alpha, d_beta, d_gamma


# --- tensor-level kernels (no validation, used by the gradient code) --------

def _apply_1q(tensor: np.ndarray, matrix: np.ndarray, qubit: int) -> np.ndarray:
    moved = np.tensordot(matrix, tensor, axes=([1], [qubit]))
    return np.moveaxis(moved, 0, qubit)


def _apply_cnot(tensor: np.ndarray, control: int, target: int) -> np.ndarray:
    result = tensor.copy()
    on = [slice(None)] * tensor.ndim
    on[control] = 1
    on = tuple(on)
    # after fixing the control axis, axes above it shift down by one
    axis = target if target < control else target - 1
    result[on] = np.flip(tensor[on], axis=axis)
    return result


def _check_qubit(qubit: int, n_qubits: int) -> None:
    if not 0 <= qubit < n_qubits:
        raise QubitOutOfRange(f"qubit {qubit} outside 0..{n_qubits - 1}")


def _z_signs(n_qubits: int) -> np.ndarray:
    """signs[i, k] = (-1)^{bit_i(k)} with qubit 0 as the most significant bit"""
    indices = np.arange(2 ** n_qubits)
    shifts = n_qubits - 1 - np.arange(n_qubits)
    bits = (indices[None, :] >> shifts[:, None]) & 1
    return 1.0 - 2.0 * bits


# --- public operations ------------------------------------------------------

def amplitude_encode(x: np.ndarray, n_qubits: int) -> StateVector:
    """Zero-pad a real vector to 2^n entries and normalize it into a state"""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    dim = 2 ** n_qubits
    if x.size > dim:
        raise DimensionOverflow(f"{x.size} features do not fit into {n_qubits} qubits ({dim} amplitudes)")
    norm = float(np.linalg.norm(x))
    if norm <= ZERO_NORM_THRESHOLD:
        raise ZeroVector("cannot amplitude-encode a zero vector")
    padded = np.zeros(dim, dtype=np.complex128)
    padded[: x.size] = x / norm
    return StateVector(n_qubits, padded)


def apply_rotation(state: StateVector, qubit: int, alpha: float, beta: float, gamma: float) -> StateVector:
    _check_qubit(qubit, state.n_qubits)
    tensor = _apply_1q(state.tensor(), rotation_matrix(alpha, beta, gamma), qubit)
    return StateVector(state.n_qubits, tensor.reshape(-1))


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    _check_qubit(control, state.n_qubits)
    _check_qubit(target, state.n_qubits)
    if control == target:
        raise ControlEqualsTarget(f"control and target are both qubit {control}")
    tensor = _apply_cnot(state.tensor(), control, target)
    return StateVector(state.n_qubits, tensor.reshape(-1))


def strongly_entangling_layer(state: StateVector, params: RotationParams, layout: CircuitLayout) -> StateVector:
    """Rotate every qubit by its angle triple, then apply the CNOT ring"""
    if params.n_qubits != state.n_qubits or layout.n_qubits != state.n_qubits:
        raise InvalidRotationParams(
            f"params ({params.n_qubits}) / layout ({layout.n_qubits}) do not match state ({state.n_qubits} qubits)"
        )
    for qubit, (alpha, beta, gamma) in enumerate(params.angles):
        state = apply_rotation(state, qubit, alpha, beta, gamma)
    for control, target in layout.cnot_pairs():
        state = apply_cnot(state, control, target)
    return state


def pauli_z_expectations(state: StateVector) -> np.ndarray:
    """<Z_i> for every qubit, each in [-1, 1]"""
    probabilities = np.abs(state.amplitudes) ** 2
    expectations = _z_signs(state.n_qubits) @ probabilities
    return np.clip(expectations, -1.0, 1.0)
