"""
Base package for SAFE-QML.

Contains the shared data structures and the error hierarchy:
- Dataset: feature matrix with integer class labels
- ModelKind: enum of the compared classifier families
- derive_seed: counter-based child seeds for folds and grid levels
- errors: SafeQmlError and its families
"""

from .base import Dataset, ModelKind, derive_seed
from .errors import *  # noqa: F403
from .errors import SafeQmlError

__all__ = ['Dataset', 'ModelKind', 'derive_seed', 'SafeQmlError']
