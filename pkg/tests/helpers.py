"""Shared instance builders and independent oracles.

The oracles deliberately avoid the package's own log-domain code paths:
everything here goes through scipy primitives or plain linear-domain
arithmetic so that agreement between the two routes means something.
"""
import numpy as np
from scipy.special import log_softmax, logsumexp

from pagree import LogitMatrix, PairedEvaluation


def make_pair(first, second, ids=None) -> PairedEvaluation:
    a = LogitMatrix(first) if ids is None else LogitMatrix(first, ids=ids)
    b = LogitMatrix(second, ids=a.ids)
    return PairedEvaluation(a, b)


def random_pair(rng, n: int, k: int, scale: float = 1.0) -> PairedEvaluation:
    return make_pair(
        rng.uniform(-scale, scale, (n, k)), rng.uniform(-scale, scale, (n, k))
    )


def hard_pair(n: int, k: int, margin: float, flips: int) -> PairedEvaluation:
    """One-hot style pair: row i backs class i % k with +-margin logits.

    The second realization moves the argmax of the first ``flips`` rows to
    the next class; the rest agree exactly.
    """
    classes = np.arange(n) % k
    first = np.full((n, k), -margin, dtype=np.float64)
    first[np.arange(n), classes] = margin
    second = first.copy()
    moved = (classes[:flips] + 1) % k
    second[np.arange(flips)] = -margin
    second[np.arange(flips), moved] = margin
    return make_pair(first, second)


def oracle_raw(pair: PairedEvaluation, beta: float) -> float:
    """Per-observation objective via scipy's log_softmax/logsumexp."""
    lp1 = log_softmax(beta * pair.first.scores, axis=1)
    lp2 = log_softmax(beta * pair.second.scores, axis=1)
    return float(logsumexp(lp1 + lp2, axis=1).sum())


def grid_scan(pair: PairedEvaluation, lo=0.0, hi=40.0, points=100_000, chunk=2_000):
    """Dense-grid maximization of the raw objective, vectorized in chunks.

    Returns (best_beta, best_value). Only meaningful when the maximizer
    actually lies inside [lo, hi].
    """
    f1 = pair.first.scores[None]
    f2 = pair.second.scores[None]
    betas = np.linspace(lo, hi, points)
    best_beta, best_val = lo, -np.inf
    for start in range(0, points, chunk):
        b = betas[start : start + chunk, None, None]
        lp1 = log_softmax(b * f1, axis=2)
        lp2 = log_softmax(b * f2, axis=2)
        vals = logsumexp(lp1 + lp2, axis=2).sum(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_beta = float(betas[start + i])
    return best_beta, best_val


def central_difference(f, beta: float) -> float:
    h = 1e-4 * max(1.0, beta)
    return (f(beta + h) - f(beta - h)) / (2.0 * h)
