"""
Model checkpoints as JSON documents.

Every parameter array is stored row-major with its explicit shape; values are
written as shortest-round-trip decimal strings, so save -> load is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from ..base import ModelKind
from ..base.errors import CheckpointError, IoFailure
from ..log.logger import get_logger, log_function_call
from .classifiers import Classifier, HybridModel, MODEL_REGISTRY

log = get_logger(__name__)

CHECKPOINT_FORMAT = "safeqml-checkpoint/1"


def encode_array(array: np.ndarray) -> dict:
    array = np.asarray(array, dtype=np.float64)
    return {"shape": list(array.shape), "values": [repr(float(v)) for v in array.reshape(-1)]}


def decode_array(payload: dict) -> np.ndarray:
    try:
        shape = tuple(int(s) for s in payload["shape"])
        values = np.array([float(v) for v in payload["values"]], dtype=np.float64)
        return values.reshape(shape)
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"malformed array payload: {e}") from e


def checkpoint_document(model: Classifier, seed: int | None = None, config: Any = None,
                        scaler: Any = None) -> dict:
    dimensions = {"n_features": model.n_features, "n_classes": model.n_classes}
    if isinstance(model, HybridModel):
        dimensions["n_qubits"] = model.n_qubits
    document = {
        "format": CHECKPOINT_FORMAT,
        "kind": model.kind.value,
        "dimensions": dimensions,
        "seed": seed,
        "config": config.to_dict() if config is not None else None,
        "parameters": {name: encode_array(p) for name, p in model.parameters().items()},
    }
    if scaler is not None:
        document["scaler"] = {"mean": encode_array(scaler.mean), "scale": encode_array(scaler.scale)}
    return document


@log_function_call("INFO")
def save_checkpoint(model: Classifier, path: str | Path, seed: int | None = None,
                    config: Any = None, scaler: Any = None) -> Path:
    path = Path(path)
    document = checkpoint_document(model, seed=seed, config=config, scaler=scaler)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(document, indent=1) + "\n", encoding="utf-8")
    except OSError as e:
        raise IoFailure(f"cannot write checkpoint {path}: {e}") from e
    log.info(f"💾 Saved {model.kind.label} checkpoint to {path}")
    return path


def model_from_document(document: dict) -> Classifier:
    if document.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"unsupported checkpoint format {document.get('format')!r}")
    try:
        kind = ModelKind(document["kind"])
        dims = document["dimensions"]
        n_features, n_classes = int(dims["n_features"]), int(dims["n_classes"])
    except (KeyError, ValueError) as e:
        raise CheckpointError(f"malformed checkpoint header: {e}") from e

    rng = np.random.default_rng(0)
    if kind is ModelKind.QML:
        model = HybridModel.initialize(n_features, n_classes, rng, n_qubits=int(dims["n_qubits"]))
    else:
        model = MODEL_REGISTRY[kind].initialize(n_features, n_classes, rng)

    stored = document.get("parameters", {})
    params = model.parameters()
    if set(stored) != set(params):
        raise CheckpointError(f"parameter names {sorted(stored)} != expected {sorted(params)}")
    for name, target in params.items():
        values = decode_array(stored[name])
        if values.shape != target.shape:
            raise CheckpointError(f"{name}: stored shape {values.shape} != {target.shape}")
        target[...] = values
    return model


def load_checkpoint(path: str | Path) -> tuple[Classifier, dict]:
    """The model plus the remaining metadata (seed, config, scaler arrays)"""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise IoFailure(f"cannot read checkpoint {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CheckpointError(f"{path} is not valid JSON: {e}") from e

    model = model_from_document(document)
    meta = {"seed": document.get("seed"), "config": document.get("config")}
    if "scaler" in document:
        meta["scaler"] = {k: decode_array(v) for k, v in document["scaler"].items()}
    log.info(f"📂 Loaded {model.kind.label} checkpoint from {path}")
    return model, meta
