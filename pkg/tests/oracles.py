"""Independent reimplementations used as test oracles.

Everything here recomputes expected values from first principles
(exhaustive enumeration, bisection, quadrature) without touching the
dynamic programs or solvers under test.
"""

import itertools
import math

import numpy as np
from scipy.integrate import quad

from medn import SequenceInstance


def enumerate_labelings(m: int, length: int) -> np.ndarray:
    """All m**length labelings, lexicographic order, one per row."""
    return np.array(list(itertools.product(range(m), repeat=length)), dtype=np.int64)


def chain_scores(d: int, m: int, weights, x, labelings) -> np.ndarray:
    """Score of every candidate labeling by direct weight-block indexing."""
    weights = np.asarray(weights, dtype=float)
    state = weights[: d * m].reshape(d, m)
    trans = weights[d * m :].reshape(m, m)
    node = np.asarray(x, dtype=float) @ state
    length = node.shape[0]
    scores = node[np.arange(length), labelings].sum(axis=1)
    if length > 1:
        scores = scores + trans[labelings[:, :-1], labelings[:, 1:]].sum(axis=1)
    return scores


def manual_score(d: int, m: int, weights, x, y) -> float:
    """Sequence score accumulated term by term with python loops."""
    weights = np.asarray(weights, dtype=float)
    state = weights[: d * m].reshape(d, m)
    trans = weights[d * m :].reshape(m, m)
    total = 0.0
    for l, label in enumerate(y):
        for k in range(d):
            total += x[l][k] * state[k][label]
    for l in range(len(y) - 1):
        total += trans[y[l]][y[l + 1]]
    return total


def l1_projection_oracle(v, radius: float) -> np.ndarray:
    """L1-ball projection via bisection on the KKT threshold.

    Verifies the KKT conditions of the projection problem explicitly
    (boundary feasibility, stationarity on the support, threshold
    domination off it) before returning.
    """
    v = np.asarray(v, dtype=float)
    mag = np.abs(v)
    if mag.sum() <= radius:
        return v.copy()
    lo, hi = 0.0, float(mag.max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.maximum(mag - mid, 0.0).sum() > radius:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    u = np.sign(v) * np.maximum(mag - theta, 0.0)
    assert theta > 0.0
    assert abs(np.abs(u).sum() - radius) < 1e-9
    support = u != 0.0
    np.testing.assert_allclose(v[support] - u[support], theta * np.sign(u[support]), atol=1e-9)
    assert np.all(mag[~support] <= theta + 1e-12)
    return u


def laplace_tilted_mean(eta: float, lam: float) -> float:
    """Posterior mean by quadrature of the tilted double-exponential density."""
    s = math.sqrt(lam)

    def dens(w):
        return 0.5 * s * math.exp(-s * abs(w) + eta * w)

    num = quad(lambda w: w * dens(w), -np.inf, 0.0)[0]
    num += quad(lambda w: w * dens(w), 0.0, np.inf)[0]
    den = quad(dens, -np.inf, 0.0)[0] + quad(dens, 0.0, np.inf)[0]
    return num / den


def inverse_variance_expectation(second_moment: float, lam: float) -> float:
    """E[1/tau] under the per-coordinate variance posterior, by quadrature.

    The posterior is proportional to N(sqrt(second_moment) | 0, tau) times
    an exponential(lam/2) prior on tau.
    """

    def dens(tau):
        return math.exp(-second_moment / (2.0 * tau)) / math.sqrt(tau) * math.exp(
            -lam * tau / 2.0
        )

    num = quad(lambda t: dens(t) / t, 0.0, np.inf)[0]
    den = quad(dens, 0.0, np.inf)[0]
    return num / den


def make_signal_instances(rng, n: int, length: int, d: int) -> list:
    """Separable toy data: column 0 carries +-1 signs that determine labels."""
    instances = []
    for _ in range(n):
        sign = rng.choice([-1.0, 1.0], size=length)
        x = rng.standard_normal((length, d)) * 0.1
        x[:, 0] = sign
        y = (sign < 0).astype(np.int64)
        instances.append(SequenceInstance(features=x, labels=y))
    return instances
