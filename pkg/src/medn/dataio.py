"""Dataset and model files.

A dataset file is line-delimited JSON: one header line with dimensions and
generator metadata, then one object per instance with keys "x" (L x d
feature rows) and "y" (L label indices).  Model files are a single JSON
object carrying a format version, the model kind, weights, optional
variances, and hyperparameters.  All writers emit canonical JSON (sorted
keys, fixed separators, "\\n" newlines) so identical inputs produce
byte-identical files.
"""

import json
from dataclasses import dataclass

import numpy as np

from .chain import FeatureSpec, SequenceInstance

__all__ = [
    "DATASET_FORMAT",
    "MODEL_FORMAT",
    "ModelFile",
    "write_dataset",
    "read_dataset",
    "write_model_file",
    "read_model_file",
]

DATASET_FORMAT = 1
MODEL_FORMAT = 1

_DATASET_KIND = "sequence-dataset"
_MODEL_KINDS = ("m3n", "lapmedn", "l1m3n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_dataset(path, instances, spec: FeatureSpec, meta: dict | None = None):
    """Write instances with a header carrying d, m, and generator metadata."""
    header = {
        "format": DATASET_FORMAT,
        "kind": _DATASET_KIND,
        "d": spec.d,
        "m": spec.m,
        "meta": meta or {},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dumps(header) + "\n")
        for inst in instances:
            fh.write(_dumps({"x": inst.features.tolist(), "y": inst.labels.tolist()}) + "\n")


def read_dataset(path):
    """Parse a dataset file; returns (instances, spec, meta).

    Every line must parse and agree with the header's d and m.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty dataset file")
    header = json.loads(lines[0])
    if header.get("kind") != _DATASET_KIND:
        raise ValueError(f"{path}: not a dataset file")
    if header.get("format") != DATASET_FORMAT:
        raise ValueError(f"{path}: unsupported dataset format {header.get('format')}")
    spec = FeatureSpec(int(header["d"]), int(header["m"]))
    instances = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        obj = json.loads(line)
        x = np.asarray(obj["x"], dtype=float)
        y = np.asarray(obj["y"], dtype=np.int64)
        if x.ndim != 2 or x.shape[1] != spec.d:
            raise ValueError(f"{path}:{lineno}: feature row width disagrees with header d")
        if np.any(y >= spec.m):
            raise ValueError(f"{path}:{lineno}: label index exceeds header m")
        instances.append(SequenceInstance(features=x, labels=y))
    return instances, spec, header.get("meta", {})


@dataclass
class ModelFile:
    """Deserialized model: kind, dimensions, prediction weights, extras.

    ``weights`` are the point weights used for prediction (the posterior
    mean for distribution-valued models); ``var_diag`` is present only for
    those.  ``hyper`` carries hyperparameters, the training seed, and
    bookkeeping such as n_train.
    """

    kind: str
    spec: FeatureSpec
    weights: np.ndarray
    var_diag: np.ndarray | None
    hyper: dict

    def __post_init__(self):
        if self.kind not in _MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.spec.K,):
            raise ValueError("weights length disagrees with spec")
        if self.var_diag is not None:
            self.var_diag = np.asarray(self.var_diag, dtype=float)
            if self.var_diag.shape != (self.spec.K,):
                raise ValueError("var_diag length disagrees with spec")


def write_model_file(path, model: ModelFile):
    payload = {
        "format": MODEL_FORMAT,
        "kind": model.kind,
        "d": model.spec.d,
        "m": model.spec.m,
        "weights": model.weights.tolist(),
        "var_diag": None if model.var_diag is None else model.var_diag.tolist(),
        "hyper": model.hyper,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dumps(payload) + "\n")


def read_model_file(path) -> ModelFile:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: unsupported model format {payload.get('format')}")
    spec = FeatureSpec(int(payload["d"]), int(payload["m"]))
    var = payload.get("var_diag")
    return ModelFile(
        kind=payload["kind"],
        spec=spec,
        weights=np.asarray(payload["weights"], dtype=float),
        var_diag=None if var is None else np.asarray(var, dtype=float),
        hyper=payload.get("hyper", {}),
    )
