"""
Statevector simulator: gate conventions, the dense Kronecker-product oracle,
norm and isometry properties and reverse-mode gradients.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.base.errors import (
    ControlEqualsTarget,
    DimensionOverflow,
    InvalidRotationParams,
    InvalidStateVector,
    QubitOutOfRange,
    ZeroVector,
)
from src.quantum import (
    CircuitLayout,
    RotationParams,
    StateVector,
    amplitude_encode,
    apply_cnot,
    apply_rotation,
    circuit_backward,
    circuit_expectations,
    circuit_forward,
    pauli_z_expectations,
    rotation_matrix,
    strongly_entangling_layer,
    unitary_vjp,
)
from src.quantum.simulator import rotation_derivatives

from .conftest import random_state

H = 1e-5


# --- dense oracle -----------------------------------------------------------

def dense_single_qubit(matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """I x ... x M x ... x I with qubit 0 as the leftmost (most significant) factor"""
    full = np.array([[1.0 + 0j]])
    for q in range(n):
        full = np.kron(full, matrix if q == qubit else np.eye(2))
    return full


def dense_cnot(control: int, target: int, n: int) -> np.ndarray:
    dim = 2 ** n
    full = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim):
        bit = (k >> (n - 1 - control)) & 1
        image = k ^ (1 << (n - 1 - target)) if bit else k
        full[image, k] = 1.0
    return full


def dense_layer(angles: np.ndarray, n: int) -> np.ndarray:
    unitary = np.eye(2 ** n, dtype=np.complex128)
    for q in range(n):
        unitary = dense_single_qubit(rotation_matrix(*angles[q]), q, n) @ unitary
    if n > 1:
        for i in range(n):
            unitary = dense_cnot(i, (i + 1) % n, n) @ unitary
    return unitary


def random_angles(rng, n):
    return RotationParams(rng.uniform(0, 2 * np.pi, size=(n, 3)))


# --- encoding ---------------------------------------------------------------

def test_amplitude_encode_examples():
    assert_allclose(amplitude_encode(np.array([1.0, 0, 0, 0]), 2).amplitudes, [1, 0, 0, 0])
    assert_allclose(amplitude_encode(np.array([3.0, 4.0]), 1).amplitudes, [0.6, 0.8], atol=1e-15)
    r = 1 / np.sqrt(3)
    assert_allclose(amplitude_encode(np.array([1.0, 1.0, 1.0]), 2).amplitudes, [r, r, r, 0], atol=1e-15)


def test_amplitude_encode_errors():
    with pytest.raises(ZeroVector):
        amplitude_encode(np.zeros(4), 2)
    with pytest.raises(DimensionOverflow):
        amplitude_encode(np.ones(5), 2)


def test_state_vector_validation():
    with pytest.raises(InvalidStateVector):
        StateVector(2, np.ones(4))
    with pytest.raises(InvalidStateVector):
        StateVector(2, np.array([1.0, 0.0]))


def test_rotation_params_validation():
    with pytest.raises(InvalidRotationParams):
        RotationParams(np.zeros((2, 2)))
    with pytest.raises(InvalidRotationParams):
        RotationParams(np.array([[0.0, np.nan, 0.0]]))


# --- gates ------------------------------------------------------------------

def test_identity_rotation_keeps_state(rng):
    state = StateVector(3, random_state(rng, 3))
    assert_allclose(apply_rotation(state, 1, 0.0, 0.0, 0.0).amplitudes, state.amplitudes, atol=1e-15)


def test_ry_pi_flips_zero_to_one():
    out = apply_rotation(StateVector.basis(1, 0), 0, 0.0, np.pi, 0.0)
    assert_allclose(out.amplitudes, [0, 1], atol=1e-15)


def test_rotation_matches_dense_oracle(rng):
    for _ in range(20):
        psi = random_state(rng, 3)
        qubit = int(rng.integers(3))
        alpha, beta, gamma = rng.uniform(0, 2 * np.pi, 3)
        got = apply_rotation(StateVector(3, psi), qubit, alpha, beta, gamma).amplitudes
        expected = dense_single_qubit(rotation_matrix(alpha, beta, gamma), qubit, 3) @ psi
        assert_allclose(got, expected, atol=1e-12)


def test_cnot_truth_table():
    # |10> -> |11>, |01> unchanged (qubit 0 is the most significant bit)
    assert_allclose(apply_cnot(StateVector.basis(2, 2), 0, 1).amplitudes, [0, 0, 0, 1])
    assert_allclose(apply_cnot(StateVector.basis(2, 1), 0, 1).amplitudes, [0, 1, 0, 0])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cnot_matches_dense_oracle(rng, n):
    psi = random_state(rng, n)
    for control in range(n):
        for target in range(n):
            if control == target:
                continue
            got = apply_cnot(StateVector(n, psi), control, target).amplitudes
            assert_allclose(got, dense_cnot(control, target, n) @ psi, atol=1e-15)


def test_gate_errors():
    state = StateVector.basis(2, 0)
    with pytest.raises(QubitOutOfRange):
        apply_rotation(state, 2, 0.1, 0.2, 0.3)
    with pytest.raises(QubitOutOfRange):
        apply_cnot(state, 0, 5)
    with pytest.raises(ControlEqualsTarget):
        apply_cnot(state, 1, 1)


# --- layer ------------------------------------------------------------------

def test_layout_ring():
    assert CircuitLayout(3).cnot_pairs() == [(0, 1), (1, 2), (2, 0)]
    assert CircuitLayout(1).cnot_pairs() == []
    with pytest.raises(ControlEqualsTarget):
        CircuitLayout(2, entangler_range=2)


def test_zero_angle_layer_is_cnot_pair():
    state = StateVector(2, np.array([0.1, 0.2, 0.3, np.sqrt(1 - 0.14)]))
    got = strongly_entangling_layer(state, RotationParams.zeros(2), CircuitLayout(2))
    expected = apply_cnot(apply_cnot(state, 0, 1), 1, 0)
    assert_allclose(got.amplitudes, expected.amplitudes, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_zero_angle_layer_fixes_all_zeros(n):
    state = StateVector.basis(n, 0)
    out = strongly_entangling_layer(state, RotationParams.zeros(n), CircuitLayout(n))
    assert_allclose(out.amplitudes, state.amplitudes)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_layer_matches_dense_oracle(rng, n):
    layout = CircuitLayout(n)
    for _ in range(125):
        params = random_angles(rng, n)
        psi, phi = random_state(rng, n), random_state(rng, n)
        out_psi = strongly_entangling_layer(StateVector(n, psi), params, layout)
        out_phi = strongly_entangling_layer(StateVector(n, phi), params, layout)
        assert_allclose(out_psi.amplitudes, dense_layer(params.angles, n) @ psi, atol=1e-12)
        assert abs(out_psi.norm() - 1.0) < 1e-10
        isometry_gap = np.linalg.norm(out_psi.amplitudes - out_phi.amplitudes) - np.linalg.norm(psi - phi)
        assert abs(isometry_gap) < 1e-10


# --- readout ----------------------------------------------------------------

def test_pauli_z_examples():
    assert_allclose(pauli_z_expectations(StateVector.basis(2, 0)), [1, 1])
    assert_allclose(pauli_z_expectations(StateVector.basis(2, 1)), [1, -1])
    uniform = StateVector(2, np.full(4, 0.5))
    assert_allclose(pauli_z_expectations(uniform), [0, 0], atol=1e-15)


def test_pauli_z_bounded(rng):
    for _ in range(50):
        q = pauli_z_expectations(StateVector(3, random_state(rng, 3)))
        assert np.all(q >= -1.0) and np.all(q <= 1.0)


def test_tape_forward_matches_validated_forward(rng):
    params = random_angles(rng, 3)
    x = rng.standard_normal(6)
    q, tape = circuit_forward(x, params)
    assert_allclose(q, circuit_expectations(x, params), atol=1e-14)
    assert tape.input_size == 6


# --- gradients --------------------------------------------------------------

def test_rotation_derivatives_match_finite_differences(rng):
    alpha, beta, gamma = rng.uniform(0, 2 * np.pi, 3)
    analytic = rotation_derivatives(alpha, beta, gamma)
    for j in range(3):
        plus, minus = np.array([alpha, beta, gamma]), np.array([alpha, beta, gamma])
        plus[j] += H
        minus[j] -= H
        numeric = (rotation_matrix(*plus) - rotation_matrix(*minus)) / (2 * H)
        assert_allclose(analytic[j], numeric, atol=1e-9)


def test_zero_upstream_gives_zero_gradients(rng):
    params = random_angles(rng, 2)
    grad_input, grad_params = circuit_backward(rng.standard_normal(4), params, np.zeros(2))
    assert np.all(grad_input == 0)
    assert np.all(grad_params == 0)


def test_single_qubit_beta_gradient():
    params = RotationParams.zeros(1)
    _, grad_params = circuit_backward(np.array([1.0, 0.0]), params, np.array([1.0]))

    def q0(beta):
        return circuit_expectations(np.array([1.0, 0.0]), RotationParams(np.array([[0.0, beta, 0.0]])))[0]

    numeric = (q0(H) - q0(-H)) / (2 * H)
    assert abs(grad_params[0, 1] - numeric) < 1e-6


def _relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-6)
    return float(np.max(np.abs(analytic - numeric) / scale))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_circuit_gradients_match_finite_differences(rng, n):
    for _ in range(10):
        d = int(rng.integers(1, 2 ** n + 1))
        x = rng.standard_normal(d)
        params = random_angles(rng, n)
        upstream = rng.standard_normal(n)
        grad_input, grad_params = circuit_backward(x, params, upstream)

        def loss(x_, angles_):
            return float(upstream @ circuit_expectations(x_, RotationParams(angles_)))

        numeric_input = np.zeros(d)
        for i in range(d):
            step = np.zeros(d)
            step[i] = H
            numeric_input[i] = (loss(x + step, params.angles) - loss(x - step, params.angles)) / (2 * H)
        numeric_params = np.zeros((n, 3))
        for idx in np.ndindex(n, 3):
            step = np.zeros((n, 3))
            step[idx] = H
            numeric_params[idx] = (loss(x, params.angles + step) - loss(x, params.angles - step)) / (2 * H)

        assert _relative_error(grad_input, numeric_input) < 1e-4
        assert _relative_error(grad_params, numeric_params) < 1e-4


def test_unitary_backprop_preserves_norm(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        params = random_angles(rng, n)
        cotangent = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
        pulled = unitary_vjp(cotangent, params)
        assert abs(np.linalg.norm(pulled) - np.linalg.norm(cotangent)) < 1e-10
