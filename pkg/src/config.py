"""
Run configuration.

A JSON file whose top-level keys mirror RunConfig's fields; `train`, `curves`
and `synthetic` are objects mirroring TrainConfig, CurveConfig and
SyntheticSpec. Command-line flags override file values.

Example:
    {
        "data": "features.csv",
        "kinds": ["qml", "mlp", "linear"],
        "folds": 5,
        "seed": 7,
        "train": {"epochs": 20, "learning_rate": 0.003},
        "curves": {"fgsm_epsilons": [0.0, 0.1, 0.2]}
    }
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .base import ModelKind, SafeQmlError
from .base.errors import ConfigError
from .datasets import SyntheticSpec
from .log.logger import get_logger
from .models import TrainConfig, config_for_kind
from .perturbations import CurveConfig

log = get_logger(__name__)

DEFAULT_KINDS = (ModelKind.QML, ModelKind.MLP, ModelKind.LINEAR)
LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")
# fields that never change results
NON_SEMANTIC_FIELDS = ("out", "log_level", "workers")


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    synthetic: SyntheticSpec | None = None
    kinds: tuple[ModelKind, ...] = DEFAULT_KINDS
    train: TrainConfig = field(default_factory=TrainConfig)
    curves: CurveConfig = field(default_factory=CurveConfig)
    folds: int = 5
    seed: int = 0
    out: str = "results"
    workers: int = 1
    log_level: str = "WARNING"

    def __post_init__(self):
        if not self.kinds:
            raise ConfigError("at least one model kind is required")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"unknown log level {self.log_level!r}")

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Replace every field whose override is not None"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        try:
            return replace(self, **changes)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    def check_paths(self) -> None:
        """Referenced input files must exist before any work starts"""
        if self.data is not None and not Path(self.data).is_file():
            raise ConfigError(f"dataset file not found: {self.data}")

    def _semantic_train(self) -> dict:
        # training is reseeded per fold and L2 is resolved per kind
        train = self.train.to_dict()
        del train["seed"], train["l2_strength"]
        train["l2_by_kind"] = {kind.value: config_for_kind(self.train, kind).l2_strength for kind in self.kinds}
        return train

    def semantic_dict(self) -> dict:
        """Every field that influences results, in JSON-ready form"""
        return {
            "data": self.data,
            "synthetic": self.synthetic.to_dict() if self.synthetic is not None else None,
            "kinds": [kind.value for kind in self.kinds],
            "train": self._semantic_train(),
            "curves": self.curves.to_dict(),
            "folds": self.folds,
            "seed": self.seed,
        }


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON (sorted keys, shortest round-trip floats) of the semantic fields"""
    canonical = json.dumps(config.semantic_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def parse_kinds(values) -> tuple[ModelKind, ...]:
    """Kinds from a list or a comma-separated string, duplicates dropped"""
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    try:
        return tuple(dict.fromkeys(ModelKind.parse(str(v)) for v in values))
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _build(cls, payload: Any, section: str):
    if not isinstance(payload, dict):
        raise ConfigError(f"'{section}' must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ConfigError(f"unknown keys in '{section}': {unknown}")
    try:
        return cls(**payload)
    except (SafeQmlError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid '{section}': {e}") from e


def run_config_from_dict(payload: dict) -> RunConfig:
    if not isinstance(payload, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {unknown}")

    values = dict(payload)
    if "train" in values:
        values["train"] = _build(TrainConfig, values["train"], "train")
    if "curves" in values:
        values["curves"] = _build(CurveConfig, values["curves"], "curves")
    if values.get("synthetic") is not None:
        values["synthetic"] = _build(SyntheticSpec, values["synthetic"], "synthetic")
    if "kinds" in values:
        values["kinds"] = parse_kinds(values["kinds"])
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def load_run_config(path: str | Path | None = None) -> RunConfig:
    """Defaults when path is None; otherwise the JSON file at path"""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    config = run_config_from_dict(payload)
    log.debug(f"⚙️ Loaded run config from {path}")
    return config
