"""Shared fixtures for the SAFE-QML test suites."""

import os
import tempfile

# log files of test runs stay out of the repository
os.environ.setdefault("SAFEQML_LOG_DIR", tempfile.mkdtemp(prefix="safeqml-test-logs-"))

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from src.base import Dataset, ModelKind  # noqa: E402
from src.datasets import SyntheticSpec, generate_synthetic  # noqa: E402
from src.evaluation import standardize  # noqa: E402
from src.models import TrainConfig, config_for_kind, train_model  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    amplitudes = rng.standard_normal(2 ** n_qubits) + 1j * rng.standard_normal(2 ** n_qubits)
    return amplitudes / np.linalg.norm(amplitudes)


@pytest.fixture(scope="session")
def blobs() -> Dataset:
    """3 well-separated classes, d=8, standardized"""
    raw = generate_synthetic(SyntheticSpec(n_samples=150, n_features=8, n_classes=3, separation=4.0, seed=3))
    features, _, _ = standardize(raw.features)
    return raw.with_features(features)


@pytest.fixture(scope="session")
def trained_models(blobs) -> dict:
    """One small trained model of every kind on the blobs"""
    config = TrainConfig(epochs=8, batch_size=16, learning_rate=0.01, seed=5)
    return {kind: train_model(kind, blobs, config_for_kind(config, kind)) for kind in ModelKind}
