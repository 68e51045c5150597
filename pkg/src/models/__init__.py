"""
Model package: the hybrid quantum classifier, the MLP and Linear baselines,
the shared Adam training loop and FGSM input perturbations.

Usage:
    from src.models import TrainConfig, train_model
    from src.base import ModelKind

    model = train_model(ModelKind.QML, train_set, TrainConfig(seed=7))
    probs = model.predict_proba(test_features)
"""

from .checkpoint import load_checkpoint, save_checkpoint
from .classifiers import (
    Classifier,
    HybridModel,
    LinearModel,
    MlpModel,
    build_model,
    count_parameters,
    hybrid_backward,
    hybrid_forward,
    linear_forward,
    mlp_forward,
    qubits_for,
)
from .layers import OutputHead, PreLayer, cross_entropy, gelu, softmax
from .optim import AdamState, adam_step
from .training import LINEAR_L2_DEFAULT, TrainConfig, config_for_kind, fgsm_perturb, train_model

__all__ = [
    'AdamState',
    'Classifier',
    'HybridModel',
    'LINEAR_L2_DEFAULT',
    'LinearModel',
    'MlpModel',
    'OutputHead',
    'PreLayer',
    'TrainConfig',
    'adam_step',
    'build_model',
    'config_for_kind',
    'count_parameters',
    'cross_entropy',
    'fgsm_perturb',
    'gelu',
    'hybrid_backward',
    'hybrid_forward',
    'linear_forward',
    'load_checkpoint',
    'mlp_forward',
    'qubits_for',
    'save_checkpoint',
    'softmax',
    'train_model',
]
