"""Linear-chain sequence labeling primitives.

A chain model scores a labeled sequence with real-valued state features
(one per input-feature/label pair) and binary transition indicators (one
per adjacent label pair).  Decoding is exact max-sum dynamic programming.
Everything in this module is a pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FeatureSpec",
    "SequenceInstance",
    "ChainModel",
    "feature_vector",
    "score",
    "decode",
    "loss_augmented_decode",
    "hamming_loss",
]


@dataclass(frozen=True)
class FeatureSpec:
    """Feature-space dimensions for a linear chain.

    ``d`` is the number of real-valued input features per position and ``m``
    the label arity (uniform across positions).  Weight vectors hold the
    ``d * m`` state weights first, laid out so that input feature ``k``
    paired with label ``c`` sits at index ``k * m + c``, followed by the
    ``m * m`` transition weights with pair ``(c, c_next)`` at index
    ``d * m + c * m + c_next``.
    """

    d: int
    m: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"need d >= 1, got {self.d}")
        if self.m < 2:
            raise ValueError(f"need m >= 2, got {self.m}")

    @property
    def n_state(self) -> int:
        return self.d * self.m

    @property
    def K(self) -> int:
        """Total weight dimension: d*m state features plus m*m transitions."""
        return self.d * self.m + self.m * self.m

    def state_view(self, weights: np.ndarray) -> np.ndarray:
        """(d, m) view of the state block of a weight-shaped vector."""
        return weights[: self.n_state].reshape(self.d, self.m)

    def transition_view(self, weights: np.ndarray) -> np.ndarray:
        """(m, m) view of the transition block of a weight-shaped vector."""
        return weights[self.n_state :].reshape(self.m, self.m)


@dataclass
class SequenceInstance:
    """One observed sequence: an (L, d) feature matrix and L gold labels."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.features.shape[0] < 1:
            raise ValueError("features must be a nonempty (L, d) matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must be a vector with one entry per position")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")
        if np.any(self.labels < 0):
            raise ValueError("label indices must be nonnegative")

    def __len__(self) -> int:
        return self.features.shape[0]


@dataclass
class ChainModel:
    """A feature specification plus one weight per feature."""

    spec: FeatureSpec
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.spec.K,):
            raise ValueError(
                f"expected {self.spec.K} weights, got shape {self.weights.shape}"
            )
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")


def _check_labels(spec: FeatureSpec, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    if y.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    if np.any(y < 0) or np.any(y >= spec.m):
        raise ValueError(f"label indices must lie in [0, {spec.m})")
    return y


def _check_inputs(spec: FeatureSpec, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("inputs must be a nonempty (L, d) matrix")
    if x.shape[1] != spec.d:
        raise ValueError(f"expected {spec.d} input features, got {x.shape[1]}")
    return x


def feature_vector(spec: FeatureSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Joint feature map of a labeled sequence.

    State feature (k, c) accumulates ``x[l, k]`` over positions with label c;
    transition feature (c, c') counts adjacent pairs (y[l], y[l+1]) == (c, c').
    Additive over positions, deterministic.
    """
    x = _check_inputs(spec, x)
    y = _check_labels(spec, y)
    if y.shape[0] != x.shape[0]:
        raise ValueError("labels and inputs disagree on sequence length")
    f = np.zeros(spec.K)
    state = spec.state_view(f)
    for c in range(spec.m):
        mask = y == c
        if np.any(mask):
            state[:, c] = x[mask].sum(axis=0)
    trans = spec.transition_view(f)
    np.add.at(trans, (y[:-1], y[1:]), 1.0)
    return f


def score(model: ChainModel, x: np.ndarray, y: np.ndarray) -> float:
    """Linear sequence score: dot(weights, feature_vector(spec, x, y))."""
    return float(np.dot(model.weights, feature_vector(model.spec, x, y)))


def _chain_potentials(model: ChainModel, x: np.ndarray):
    x = _check_inputs(model.spec, x)
    node = x @ model.spec.state_view(model.weights)
    trans = model.spec.transition_view(model.weights)
    return node, trans


def _viterbi(node: np.ndarray, trans: np.ndarray):
    """Max-sum DP over (L, m) node and (m, m) transition scores.

    Ties are resolved toward the lowest label index at the final argmax and
    at every backpointer, so the result is deterministic.
    """
    length, m = node.shape
    back = np.zeros((length, m), dtype=np.int64)
    v = node[0].copy()
    for l in range(1, length):
        cand = v[:, None] + trans  # (previous, current)
        back[l] = np.argmax(cand, axis=0)  # first maximum = lowest index
        v = cand[back[l], np.arange(m)] + node[l]
    labels = np.zeros(length, dtype=np.int64)
    labels[-1] = int(np.argmax(v))
    value = float(v[labels[-1]])
    for l in range(length - 1, 0, -1):
        labels[l - 1] = back[l, labels[l]]
    return labels, value


def decode(model: ChainModel, x: np.ndarray) -> np.ndarray:
    """Highest-scoring labeling of ``x`` under the model (exact Viterbi)."""
    node, trans = _chain_potentials(model, x)
    labels, _ = _viterbi(node, trans)
    return labels


def loss_augmented_decode(model: ChainModel, instance: SequenceInstance):
    """Labeling maximizing model score plus Hamming distance to the gold labels.

    Returns ``(labels, value)`` where value is the attained maximum.  The
    per-position loss folds into the node scores, so the search stays an
    exact chain DP with the same tie-breaking as :func:`decode`.  Used to
    find the most violated margin constraint during training.
    """
    node, trans = _chain_potentials(model, instance.features)
    gold = _check_labels(model.spec, instance.labels)
    if gold.shape[0] != node.shape[0]:
        raise ValueError("gold labels and inputs disagree on sequence length")
    node = node + 1.0
    node[np.arange(len(gold)), gold] -= 1.0
    return _viterbi(node, trans)


def hamming_loss(a, b) -> int:
    """Number of positions where two equal-length labelings differ."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("labelings must have equal length")
    return int(np.sum(a != b))
