"""
Hybrid quantum classifier and the classical baselines: forward pass against a
hand-built oracle, finite-difference gradients, Adam, training and FGSM.
"""

from types import SimpleNamespace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.base import Dataset, ModelKind
from src.base.errors import EmptyDataset, LabelOutOfRange, ModelError, NonDifferentiableModel, ShapeMismatch
from src.models import (
    AdamState,
    HybridModel,
    LinearModel,
    OutputHead,
    PreLayer,
    TrainConfig,
    adam_step,
    build_model,
    config_for_kind,
    count_parameters,
    cross_entropy,
    fgsm_perturb,
    gelu,
    load_checkpoint,
    qubits_for,
    save_checkpoint,
    softmax,
    train_model,
)
from src.models.layers import DenseLayer, gelu_grad
from src.models.training import batch_gradients
from src.quantum import CircuitLayout, RotationParams

from .test_quantum_sim import dense_layer

H = 1e-5


def _loss(model, features: np.ndarray, label: int) -> float:
    return cross_entropy(model.forward(features)[0], label)


def _relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-4)
    return float(np.max(np.abs(analytic - numeric) / scale))


# --- layers -----------------------------------------------------------------

def test_gelu_values():
    assert gelu(0.0) == 0.0
    assert abs(float(gelu(1.0)) - 0.5 * (1 + np.tanh(np.sqrt(2 / np.pi) * 1.044715))) < 1e-12
    assert abs(float(gelu(10.0)) - 10.0) < 1e-6
    x = np.linspace(-4, 4, 33)
    # GELU(x) - GELU(-x) = x for the tanh form as well
    assert_allclose(gelu(x) - gelu(-x), x, atol=1e-12)


def test_gelu_grad_matches_finite_differences():
    x = np.linspace(-3, 3, 25)
    numeric = (gelu(x + 1e-6) - gelu(x - 1e-6)) / 2e-6
    assert_allclose(gelu_grad(x), numeric, atol=1e-7)


def test_cross_entropy_examples():
    assert cross_entropy(np.array([1.0, 0.0, 0.0]), 0) < 1e-9
    assert abs(cross_entropy(np.full(3, 1 / 3), 2) - np.log(3)) < 1e-12
    assert abs(cross_entropy(np.array([0.7, 0.2, 0.1]), 1) + np.log(0.2)) < 1e-12
    assert abs(cross_entropy(np.array([0.5, 0.25, 0.25]), 1) - np.log(4)) < 1e-12
    assert abs(cross_entropy(np.array([1.0, 0.0]), 1) - (-np.log(1e-12))) < 1e-9


def test_softmax_rows():
    probs = softmax(np.array([[1000.0, 0.0], [1.0, 1.0]]))
    assert np.all(np.isfinite(probs))
    assert_allclose(probs, [[1.0, 0.0], [0.5, 0.5]], atol=1e-15)
    logits = np.array([0.3, -1.2, 2.0])
    assert_allclose(softmax(logits), softmax(logits + 17.0), atol=1e-15)


def test_dense_layer_shape_checks():
    with pytest.raises(ShapeMismatch):
        DenseLayer(np.zeros((2, 3)), np.zeros(3))
    with pytest.raises(ShapeMismatch):
        OutputHead(np.zeros((1, 2)), np.zeros(1))


# --- forward ----------------------------------------------------------------

def test_qubits_for():
    assert qubits_for(1) == 1
    assert qubits_for(2) == 1
    assert qubits_for(3) == 2
    assert qubits_for(64) == 6
    assert qubits_for(65) == 7
    assert qubits_for(512) == 9


def test_hybrid_forward_matches_hand_oracle(rng):
    n, d, classes = 2, 4, 2
    pre = PreLayer(rng.uniform(-1, 1, (4, d)), rng.uniform(-1, 1, 4))
    angles = RotationParams(rng.uniform(0, 2 * np.pi, (n, 3)))
    head = OutputHead(rng.uniform(-1, 1, (classes, n)), rng.uniform(-1, 1, classes))
    model = HybridModel(pre, angles, CircuitLayout(n), head)

    x = rng.standard_normal(d)
    a = gelu(pre.weight @ x + pre.bias)
    psi = dense_layer(angles.angles, n) @ (a / np.linalg.norm(a))
    probabilities = np.abs(psi) ** 2
    z_signs = np.array([[1, 1, -1, -1], [1, -1, 1, -1]])
    q = z_signs @ probabilities
    logits = head.weight @ q + head.bias
    expected = np.exp(logits - logits.max()) / np.sum(np.exp(logits - logits.max()))

    probs, cache = model.forward(x)
    assert_allclose(cache.expectations, q, atol=1e-12)
    assert_allclose(probs, expected, atol=1e-12)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_probabilities_are_a_distribution(rng, kind):
    model = build_model(kind, 5, 4, rng)
    probs = model.predict_proba(rng.standard_normal((20, 5)))
    assert probs.shape == (20, 4)
    assert np.all(probs >= 0)
    assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)


def test_zero_head_gives_uniform_probabilities(rng):
    model = HybridModel.initialize(6, 3, rng)
    model.head.weight[...] = 0.0
    model.head.bias[...] = 0.0
    assert_allclose(model.forward(rng.standard_normal(6))[0], np.full(3, 1 / 3), atol=1e-15)


@pytest.mark.parametrize("kind", [ModelKind.MLP, ModelKind.LINEAR])
def test_zero_baseline_weights_give_uniform_probabilities(rng, kind):
    model = build_model(kind, 4, 3, rng)
    for p in model.parameters().values():
        p[...] = 0.0
    assert_allclose(model.predict_proba(rng.standard_normal((3, 4))), np.full((3, 3), 1 / 3), atol=1e-15)


def test_wrong_feature_count_raises(rng):
    model = build_model(ModelKind.MLP, 4, 2, rng)
    with pytest.raises(ShapeMismatch):
        model.forward(np.ones(5))


def test_parameter_counts_at_desk_scale(rng):
    assert count_parameters(build_model(ModelKind.QML, 512, 3, rng)) == 262_713
    assert count_parameters(build_model(ModelKind.MLP, 512, 3, rng)) == 264_195
    assert count_parameters(build_model(ModelKind.LINEAR, 512, 3, rng)) == 1_539


def test_build_model_is_seeded():
    a = build_model(ModelKind.QML, 8, 3, np.random.default_rng(4))
    b = build_model(ModelKind.QML, 8, 3, np.random.default_rng(4))
    for name, p in a.parameters().items():
        assert np.array_equal(p, b.parameters()[name])
    assert np.all(a.rotation_params.angles >= 0) and np.all(a.rotation_params.angles < 2 * np.pi)
    assert np.all(a.pre_layer.bias == 0)


# --- gradients --------------------------------------------------------------

@pytest.mark.parametrize("kind", list(ModelKind))
def test_parameter_and_input_gradients_match_finite_differences(rng, kind):
    for _ in range(5):
        d, classes = 3, 3
        model = build_model(kind, d, classes, rng)
        x = rng.standard_normal(d)
        label = int(rng.integers(classes))
        probs, cache = model.forward(x)
        grads, grad_input = model.backward(cache, label)

        for name, p in model.parameters().items():
            numeric = np.zeros_like(p)
            for idx in np.ndindex(p.shape):
                original = p[idx]
                p[idx] = original + H
                up = _loss(model, x, label)
                p[idx] = original - H
                down = _loss(model, x, label)
                p[idx] = original
                numeric[idx] = (up - down) / (2 * H)
            assert _relative_error(grads[name], numeric) < 1e-4, name

        numeric_input = np.zeros(d)
        for i in range(d):
            step = np.zeros(d)
            step[i] = H
            up = cross_entropy(model.forward(x + step)[0], label)
            down = cross_entropy(model.forward(x - step)[0], label)
            numeric_input[i] = (up - down) / (2 * H)
        assert _relative_error(grad_input, numeric_input) < 1e-4


def test_confident_correct_prediction_has_vanishing_gradients():
    model = LinearModel(DenseLayer(np.array([[100.0, 0.0], [0.0, 0.0]]), np.zeros(2)))
    _, cache = model.forward(np.array([1.0, 0.0]))
    grads, grad_input = model.backward(cache, 0)
    assert np.all(np.abs(grads["linear.weight"]) < 1e-9)
    assert np.all(np.abs(grad_input) < 1e-9)


def test_l2_penalty_only_on_linear_weights(rng):
    model = build_model(ModelKind.LINEAR, 3, 2, rng)
    features, labels = rng.standard_normal((4, 3)), np.array([0, 1, 0, 1])
    plain_loss, plain = batch_gradients(model, features, labels)
    reg_loss, reg = batch_gradients(model, features, labels, l2_strength=0.5)
    weight = model.layer.weight
    assert abs(reg_loss - plain_loss - 0.25 * np.sum(weight ** 2)) < 1e-12
    assert_allclose(reg["linear.weight"] - plain["linear.weight"], 0.5 * weight, atol=1e-12)
    assert_allclose(reg["linear.bias"], plain["linear.bias"])


# --- optimizer --------------------------------------------------------------

def test_adam_zero_gradient_keeps_parameters():
    params = {"w": np.array([1.0, -2.0])}
    adam_step(params, {"w": np.zeros(2)}, AdamState.for_params(params), TrainConfig())
    assert_allclose(params["w"], [1.0, -2.0])


def test_adam_first_step_moves_by_learning_rate():
    config = TrainConfig(learning_rate=0.01)
    params = {"w": np.array([1.0, 1.0])}
    adam_step(params, {"w": np.array([3.0, -0.2])}, AdamState.for_params(params), config)
    assert_allclose(params["w"], [1.0 - 0.01, 1.0 + 0.01], atol=1e-8)


def test_adam_two_steps_follow_the_recurrence():
    config = TrainConfig(learning_rate=0.05)
    b1, b2, eps = config.adam_beta1, config.adam_beta2, config.adam_epsilon
    g1, g2 = np.array([0.5, -1.0]), np.array([-0.25, 2.0])
    params = {"w": np.array([0.3, 0.7])}
    state = AdamState.for_params(params)
    adam_step(params, {"w": g1.copy()}, state, config)
    adam_step(params, {"w": g2.copy()}, state, config)

    w = np.array([0.3, 0.7])
    m = v = np.zeros(2)
    for t, g in enumerate((g1, g2), start=1):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        w = w - config.learning_rate * (m / (1 - b1 ** t)) / (np.sqrt(v / (1 - b2 ** t)) + eps)
    assert state.t == 2
    assert_allclose(params["w"], w, atol=1e-12)


def test_adam_rejects_mismatched_gradients():
    params = {"w": np.zeros(2)}
    with pytest.raises(ShapeMismatch):
        adam_step(params, {"w": np.zeros(3)}, AdamState.for_params(params), TrainConfig())
    with pytest.raises(ShapeMismatch):
        adam_step(params, {"v": np.zeros(2)}, AdamState.for_params(params), TrainConfig())


# --- training ---------------------------------------------------------------

def test_train_config_validation():
    with pytest.raises(ModelError):
        TrainConfig(learning_rate=0.0)
    with pytest.raises(ModelError):
        TrainConfig(batch_size=0)
    with pytest.raises(ModelError):
        TrainConfig(l2_strength=-1.0)


def test_config_for_kind_sets_l2():
    base = TrainConfig()
    assert config_for_kind(base, ModelKind.LINEAR).l2_strength == 1e-3
    assert config_for_kind(TrainConfig(l2_strength=0.1), ModelKind.LINEAR).l2_strength == 0.1
    assert config_for_kind(TrainConfig(l2_strength=0.1), ModelKind.QML).l2_strength == 0.0


def _two_blobs(seed: int = 0, n: int = 100) -> Dataset:
    rng = np.random.default_rng(seed)
    features = np.vstack([rng.normal(-3.0, 1.0, (n, 2)), rng.normal(3.0, 1.0, (n, 2))])
    return Dataset(features, np.repeat([0, 1], n), 2)


def test_linear_learns_separable_blobs():
    data = _two_blobs()
    model = train_model(ModelKind.LINEAR, data, config_for_kind(TrainConfig(learning_rate=0.05, seed=1), ModelKind.LINEAR))
    assert np.mean(model.predict_labels(data.features) == data.labels) >= 0.99


@pytest.mark.parametrize("kind", list(ModelKind))
def test_training_is_deterministic(kind):
    data = _two_blobs(n=20)
    config = config_for_kind(TrainConfig(epochs=2, batch_size=8, seed=9), kind)
    first, second = train_model(kind, data, config), train_model(kind, data, config)
    for name, p in first.parameters().items():
        assert np.array_equal(p, second.parameters()[name])


def test_training_rejects_empty_and_bad_labels():
    empty = SimpleNamespace(n_samples=0, n_features=2, n_classes=2,
                            features=np.zeros((0, 2)), labels=np.zeros(0, dtype=int))
    with pytest.raises(EmptyDataset):
        train_model(ModelKind.LINEAR, empty, TrainConfig())
    bad = SimpleNamespace(n_samples=2, n_features=2, n_classes=2,
                          features=np.zeros((2, 2)), labels=np.array([0, 5]))
    with pytest.raises(LabelOutOfRange):
        train_model(ModelKind.LINEAR, bad, TrainConfig())


@pytest.mark.slow
def test_hybrid_learns_separated_clusters():
    from src.datasets import SyntheticSpec, generate_synthetic
    from src.evaluation import standardize

    raw = generate_synthetic(SyntheticSpec(n_samples=300, n_features=16, n_classes=3, separation=6.0, seed=2))
    features, _, _ = standardize(raw.features)
    data = raw.with_features(features)
    model = train_model(ModelKind.QML, data, TrainConfig(learning_rate=0.02, epochs=30, seed=2))
    assert np.mean(model.predict_labels(data.features) == data.labels) >= 0.95


# --- FGSM -------------------------------------------------------------------

def test_fgsm_zero_epsilon_is_identity(trained_models, blobs):
    x = blobs.features[0]
    for model in trained_models.values():
        assert np.array_equal(fgsm_perturb(model, x, int(blobs.labels[0]), 0.0), x)


def test_fgsm_stays_in_the_epsilon_box(trained_models, blobs):
    for model in trained_models.values():
        for i in range(10):
            x = blobs.features[i]
            moved = fgsm_perturb(model, x, int(blobs.labels[i]), 0.1)
            assert np.max(np.abs(moved - x)) <= 0.1 + 1e-12


def test_fgsm_does_not_decrease_linear_loss(trained_models, blobs):
    model = trained_models[ModelKind.LINEAR]
    increased = 0
    for x, y in zip(blobs.features, blobs.labels):
        before = cross_entropy(model.forward(x)[0], int(y))
        after = cross_entropy(model.forward(fgsm_perturb(model, x, int(y), 0.05))[0], int(y))
        increased += after >= before
    assert increased >= 0.9 * blobs.n_samples


def test_fgsm_rejects_bad_inputs(trained_models, blobs):
    class Frozen:
        differentiable = False

    with pytest.raises(NonDifferentiableModel):
        fgsm_perturb(Frozen(), blobs.features[0], 0, 0.1)
    with pytest.raises(ModelError):
        fgsm_perturb(trained_models[ModelKind.MLP], blobs.features[0], 0, -0.1)


# --- checkpoints ------------------------------------------------------------

@pytest.mark.parametrize("kind", list(ModelKind))
def test_checkpoint_round_trip_is_bit_exact(tmp_path, trained_models, blobs, kind):
    model = trained_models[kind]
    path = save_checkpoint(model, tmp_path / f"{kind.value}.json", seed=5, config=TrainConfig(seed=5))
    restored, meta = load_checkpoint(path)
    assert type(restored) is type(model)
    for name, p in model.parameters().items():
        assert np.array_equal(p, restored.parameters()[name])
    assert np.array_equal(model.predict_proba(blobs.features[:5]), restored.predict_proba(blobs.features[:5]))
    assert meta["seed"] == 5
    assert meta["config"]["seed"] == 5
