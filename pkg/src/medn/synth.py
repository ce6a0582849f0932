"""Synthetic sequence data.

Datasets come from a randomly drawn sparse chain model: input features are
standard normal (optionally group-correlated), and each labeling is a Gibbs
sample from the model's conditional distribution over label sequences.
Every draw is keyed off the config seed through independent named streams,
so a config fully determines its dataset.
"""

import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainModel, FeatureSpec, SequenceInstance

__all__ = [
    "GeneratorConfig",
    "TrueCrf",
    "SyntheticDataset",
    "gen_crf",
    "gen_features",
    "gibbs_label",
    "gibbs_samples",
    "gen_dataset",
]

# Seed-stream tags: keep model, feature, and labeling draws independent.
_STREAM_CRF = 0
_STREAM_FEATURES = 1
_STREAM_GIBBS = 2


@dataclass(frozen=True)
class GeneratorConfig:
    """Shape and randomness of one synthetic dataset.

    ``d`` input features per position, the first ``d_rel`` of which carry
    signal; sequences of length ``L`` over ``m`` labels; ``n_samples``
    instances; ``gibbs_iters`` full resampling sweeps per labeling.  In
    correlated mode the relevant features are split into consecutive groups
    of ``group_size`` that share a base draw corrupted by N(0, noise_sd**2)
    noise.
    """

    d: int
    d_rel: int
    L: int
    m: int
    n_samples: int
    gibbs_iters: int = 500
    correlated: bool = False
    group_size: int = 1
    noise_sd: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.L < 1 or self.m < 2:
            raise ValueError("need d >= 1, L >= 1, m >= 2")
        if not 0 <= self.d_rel <= self.d:
            raise ValueError("d_rel must lie in [0, d]")
        if self.n_samples < 0:
            raise ValueError("n_samples must be nonnegative")
        if self.gibbs_iters < 1:
            raise ValueError("gibbs_iters must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.correlated:
            if self.group_size < 1 or self.d_rel % self.group_size != 0:
                raise ValueError("group_size must divide d_rel in correlated mode")
            if not self.noise_sd > 0:
                raise ValueError("noise_sd must be positive in correlated mode")


@dataclass
class TrueCrf:
    """Generating chain model; state weights vanish off the relevant features."""

    model: ChainModel
    relevant: np.ndarray


@dataclass
class SyntheticDataset:
    """Generated instances together with the model that produced them."""

    crf: TrueCrf
    instances: list


def gen_crf(cfg: GeneratorConfig) -> TrueCrf:
    """Random generating model for one dataset.

    State weights on the first ``d_rel`` input features and all transition
    weights are i.i.d. standard normal; remaining state weights are exactly
    zero.  Deterministic per config seed.
    """
    rng = np.random.default_rng([_STREAM_CRF, cfg.seed])
    spec = FeatureSpec(cfg.d, cfg.m)
    w = np.zeros(spec.K)
    spec.state_view(w)[: cfg.d_rel] = rng.standard_normal((cfg.d_rel, cfg.m))
    spec.transition_view(w)[:] = rng.standard_normal((cfg.m, cfg.m))
    return TrueCrf(model=ChainModel(spec, w), relevant=np.arange(cfg.d_rel))


def gen_features(cfg: GeneratorConfig, rng=None) -> np.ndarray:
    """One (L, d) input-feature matrix.

    Default: i.i.d. standard normal entries.  In correlated mode each
    relevant group shares one standard-normal base draw per position,
    corrupted per member by independent N(0, noise_sd**2) noise; irrelevant
    features stay i.i.d.
    """
    if rng is None:
        rng = np.random.default_rng([_STREAM_FEATURES, cfg.seed])
    if not cfg.correlated:
        return rng.standard_normal((cfg.L, cfg.d))
    x = np.empty((cfg.L, cfg.d))
    n_groups = cfg.d_rel // cfg.group_size
    base = rng.standard_normal((cfg.L, n_groups))
    noise = rng.standard_normal((cfg.L, cfg.d_rel)) * cfg.noise_sd
    x[:, : cfg.d_rel] = np.repeat(base, cfg.group_size, axis=1) + noise
    x[:, cfg.d_rel :] = rng.standard_normal((cfg.L, cfg.d - cfg.d_rel))
    return x


def _run_chain(crf: TrueCrf, x: np.ndarray, rng, burn_in: int, n_record: int):
    """Systematic-scan single-site resampling; plain floats in the inner loop
    because it runs millions of times per dataset."""
    spec = crf.model.spec
    node = (np.asarray(x, dtype=float) @ spec.state_view(crf.model.weights)).tolist()
    trans = spec.transition_view(crf.model.weights).tolist()
    m = spec.m
    length = len(node)
    y = [int(v) for v in rng.integers(0, m, size=length)]
    out = np.empty((n_record, length), dtype=np.int64) if n_record else None
    labels = range(m)
    for sweep in range(burn_in + n_record):
        for l in range(length):
            row = node[l]
            if l > 0:
                prev = trans[y[l - 1]]
                logits = [row[c] + prev[c] for c in labels]
            else:
                logits = list(row)
            if l + 1 < length:
                nxt = y[l + 1]
                logits = [logits[c] + trans[c][nxt] for c in labels]
            top = max(logits)
            probs = [math.exp(v - top) for v in logits]
            u = rng.random() * sum(probs)
            acc = 0.0
            pick = m - 1
            for c in labels:
                acc += probs[c]
                if u < acc:
                    pick = c
                    break
            y[l] = pick
        if sweep >= burn_in:
            out[sweep - burn_in] = y
    return np.asarray(y, dtype=np.int64), out


def gibbs_label(crf: TrueCrf, x: np.ndarray, sweeps: int, seed) -> np.ndarray:
    """Labeling after ``sweeps`` systematic single-site resampling passes.

    Each position is redrawn in order from its exact conditional given its
    neighbors and local state scores; the chain starts from a uniform random
    labeling.  ``seed`` may be an int or a numpy Generator.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be at least 1")
    rng = np.random.default_rng(seed)
    y, _ = _run_chain(crf, x, rng, burn_in=sweeps, n_record=0)
    return y


def gibbs_samples(
    crf: TrueCrf, x: np.ndarray, n_samples: int, burn_in: int, seed
) -> np.ndarray:
    """States after each post-burn-in sweep of one chain, as (n_samples, L)."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    _, out = _run_chain(crf, x, rng, burn_in=burn_in, n_record=n_samples)
    return out


def gen_dataset(cfg: GeneratorConfig) -> SyntheticDataset:
    """``n_samples`` instances from one randomly generated model.

    Each instance gets fresh input features and a labeling sampled by a
    ``gibbs_iters``-sweep chain; per-instance seed streams make the dataset
    a pure function of the config.
    """
    crf = gen_crf(cfg)
    instances = []
    for i in range(cfg.n_samples):
        x = gen_features(cfg, rng=np.random.default_rng([_STREAM_FEATURES, cfg.seed, i]))
        y = gibbs_label(
            crf, x, cfg.gibbs_iters, seed=np.random.default_rng([_STREAM_GIBBS, cfg.seed, i])
        )
        instances.append(SequenceInstance(features=x, labels=y))
    return SyntheticDataset(crf=crf, instances=instances)
