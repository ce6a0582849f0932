"""Optimization kernels for structured hinge objectives.

Two trainers share one stochastic subgradient loop: one with a diagonal
quadratic penalty, one constrained to an L1 ball via exact Euclidean
projection.  Both process instances in a per-epoch shuffled order with
step size ``1 / (2 * beta * sqrt(t))``, where t counts individual updates,
and return the final iterate.
"""

import math
from dataclasses import dataclass

import numpy as np

from .chain import (
    ChainModel,
    FeatureSpec,
    SequenceInstance,
    feature_vector,
    loss_augmented_decode,
    score,
)

__all__ = [
    "SubgradConfig",
    "QuadRegularizer",
    "subgradient_train",
    "l1_constrained_train",
    "l1_ball_project",
    "structured_hinge_objective",
]

# Iterates beyond this L2 norm abort training: the step size is divergent.
DIVERGENCE_LIMIT = 1e8


@dataclass(frozen=True)
class SubgradConfig:
    """Schedule for the subgradient trainers.

    ``beta`` scales the step size ``alpha_t = 1 / (2 * beta * sqrt(t))``;
    ``iterations`` is the number of full passes over the data; ``C`` weights
    the hinge term (C == 0 degenerates to the penalty-only problem); ``seed``
    drives the per-epoch instance shuffle.
    """

    beta: float
    iterations: int
    C: float
    seed: int = 0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.C < 0 or not math.isfinite(self.C):
            raise ValueError("C must be finite and nonnegative")


@dataclass
class QuadRegularizer:
    """Diagonal quadratic penalty 0.5 * w' diag(inv_diag) w."""

    inv_diag: np.ndarray

    def __post_init__(self):
        self.inv_diag = np.asarray(self.inv_diag, dtype=float)
        if self.inv_diag.ndim != 1:
            raise ValueError("inv_diag must be a vector")
        if not np.all(np.isfinite(self.inv_diag)) or np.any(self.inv_diag <= 0):
            raise ValueError("inv_diag entries must be positive and finite")

    @classmethod
    def identity(cls, k: int) -> "QuadRegularizer":
        return cls(np.ones(k))


def _check_data(data, spec: FeatureSpec):
    if not data:
        raise ValueError("training data must be nonempty")
    for inst in data:
        if inst.features.shape[1] != spec.d:
            raise ValueError("instance feature dimension disagrees with spec")
        if np.any(inst.labels >= spec.m):
            raise ValueError("instance label out of range for spec")


def _check_iterate(w: np.ndarray):
    if not np.all(np.isfinite(w)) or np.linalg.norm(w) > DIVERGENCE_LIMIT:
        raise RuntimeError(
            "subgradient iterate diverged; decrease the step size (raise beta)"
        )


def subgradient_train(
    data: list, spec: FeatureSpec, reg: QuadRegularizer, cfg: SubgradConfig
) -> ChainModel:
    """Approximately minimize 0.5 w' diag(inv) w + C * sum_i hinge_i(w).

    hinge_i(w) = max_y [w'f(x_i, y) + hamming(y, y_i)] - w'f(x_i, y_i), with
    the inner maximum found by loss-augmented decoding.  When the winner
    equals the gold labeling the instance contributes no data term.  Updates
    are preconditioned by the inverse penalty diagonal so that stiff
    coordinates (tiny penalty variance) stay numerically stable; with an
    identity penalty this is the plain subgradient step.  Starts from w = 0,
    returns the final iterate, and is bit-reproducible for a fixed seed.
    """
    _check_data(data, spec)
    if reg.inv_diag.shape != (spec.K,):
        raise ValueError("regularizer dimension disagrees with spec")
    n = len(data)
    scale = 1.0 / reg.inv_diag
    gold_feats = [feature_vector(spec, inst.features, inst.labels) for inst in data]
    rng = np.random.default_rng(cfg.seed)
    w = np.zeros(spec.K)
    t = 0
    for _ in range(cfg.iterations):
        for idx in rng.permutation(n):
            t += 1
            alpha = 1.0 / (2.0 * cfg.beta * math.sqrt(t))
            inst = data[idx]
            y_star, _ = loss_augmented_decode(ChainModel(spec, w), inst)
            w = (1.0 - alpha / n) * w
            if not np.array_equal(y_star, inst.labels):
                delta = gold_feats[idx] - feature_vector(spec, inst.features, y_star)
                w = w + (alpha * cfg.C) * (scale * delta)
            _check_iterate(w)
    return ChainModel(spec, w)


def l1_ball_project(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of ``v`` onto {u : ||u||_1 <= radius}.

    Sort-and-threshold algorithm: vectors already inside the ball are
    returned unchanged, otherwise every entry shrinks toward zero by the
    threshold that makes the result land on the ball boundary.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("input must be a vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("input must be finite")
    if not radius > 0:
        raise ValueError("radius must be positive")
    mag = np.abs(v)
    total = mag.sum()
    # Relative slack keeps re-projection an exact no-op despite the float
    # error (~K ulp) left on the boundary by a previous projection.
    if total <= radius * (1.0 + 1e-12):
        return v.copy()
    u = np.sort(mag)[::-1]
    cssv = np.cumsum(u)
    counts = np.arange(1, v.shape[0] + 1)
    rho = int(np.max(np.nonzero(u * counts > cssv - radius)[0])) + 1
    theta = (cssv[rho - 1] - radius) / rho
    return np.sign(v) * np.maximum(mag - theta, 0.0)


def l1_constrained_train(
    data: list, spec: FeatureSpec, radius: float, cfg: SubgradConfig
) -> ChainModel:
    """Minimize C * sum_i hinge_i(w) subject to ||w||_1 <= radius.

    Same stochastic loop as :func:`subgradient_train` but with no quadratic
    penalty; every update is followed by projection onto the L1 ball, so all
    iterates (and the result) are feasible.
    """
    _check_data(data, spec)
    if not radius > 0:
        raise ValueError("radius must be positive")
    n = len(data)
    gold_feats = [feature_vector(spec, inst.features, inst.labels) for inst in data]
    rng = np.random.default_rng(cfg.seed)
    w = np.zeros(spec.K)
    t = 0
    for _ in range(cfg.iterations):
        for idx in rng.permutation(n):
            t += 1
            alpha = 1.0 / (2.0 * cfg.beta * math.sqrt(t))
            inst = data[idx]
            y_star, _ = loss_augmented_decode(ChainModel(spec, w), inst)
            if not np.array_equal(y_star, inst.labels):
                delta = gold_feats[idx] - feature_vector(spec, inst.features, y_star)
                w = w + (alpha * cfg.C) * delta
            w = l1_ball_project(w, radius)
            _check_iterate(w)
    return ChainModel(spec, w)


def structured_hinge_objective(
    data: list, model: ChainModel, C: float, inv_diag: np.ndarray | None = None
) -> float:
    """Objective value 0.5 w' diag(inv_diag) w + C * sum_i hinge_i(w).

    Pass ``inv_diag=None`` for the unregularized hinge total (the quantity
    constrained trainers minimize inside their feasible set).
    """
    reg = 0.0
    if inv_diag is not None:
        reg = 0.5 * float(np.dot(model.weights, np.asarray(inv_diag) * model.weights))
    hinge = 0.0
    for inst in data:
        _, value = loss_augmented_decode(model, inst)
        hinge += value - score(model, inst.features, inst.labels)
    return reg + C * hinge
