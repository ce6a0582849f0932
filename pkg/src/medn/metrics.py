"""Prediction-error metrics and their aggregation across folds or seeds."""

from dataclasses import dataclass

import numpy as np

from .chain import ChainModel, FeatureSpec, decode

__all__ = ["MetricsReport", "evaluate_weights", "mean_std"]


@dataclass(frozen=True)
class MetricsReport:
    """Error rates over one evaluation set.

    ``per_label_err`` is the fraction of wrongly labeled positions,
    ``seq_err`` the fraction of sequences with at least one wrong position.
    """

    per_label_err: float
    seq_err: float
    n_sequences: int
    n_positions: int

    def __post_init__(self):
        for rate in (self.per_label_err, self.seq_err):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("error rates must lie in [0, 1]")


def evaluate_weights(spec: FeatureSpec, weights, instances) -> MetricsReport:
    """Decode every instance and count per-position and whole-sequence errors."""
    if not instances:
        raise ValueError("evaluation set must be nonempty")
    model = ChainModel(spec, np.asarray(weights, dtype=float))
    wrong_positions = 0
    wrong_sequences = 0
    total_positions = 0
    for inst in instances:
        pred = decode(model, inst.features)
        mismatches = int(np.sum(pred != inst.labels))
        wrong_positions += mismatches
        wrong_sequences += int(mismatches > 0)
        total_positions += len(inst)
    return MetricsReport(
        per_label_err=wrong_positions / total_positions,
        seq_err=wrong_sequences / len(instances),
        n_sequences=len(instances),
        n_positions=total_positions,
    )


def mean_std(values) -> tuple[float, float]:
    """Population mean and standard deviation (ddof = 0) of a value list."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot aggregate an empty list")
    return float(arr.mean()), float(arr.std())
