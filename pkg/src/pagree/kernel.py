"""Posterior agreement kernel over paired logit matrices.

Each observation i induces a Gibbs posterior over classes in both
realizations: p_i(j) = softmax(beta * scores_i)_j. Over the full
hypothesis set of K^N labelings the posterior factorizes across
observations, so the log overlap of the two posteriors collapses to a
sum of per-observation terms:

    raw(beta)  = sum_i log sum_j p'_ij * p''_ij         (always <= 0)
    full(beta) = raw(beta) + N log K

``full / N`` lies in [0, log K] once beta is chosen to maximize it;
at a fixed arbitrary beta only the upper bound holds. All arithmetic
stays in the log domain, so any finite ``beta * scores`` is safe (no
overflow up to magnitude 1e6 and far beyond).

Reductions over observations are accumulated in sorted order: the
result is then bit-identical under row permutation and independent of
any parallel evaluation of the per-observation terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import LogitMatrix, PairedEvaluation
from .errors import NegativeBetaError, NonFiniteError, TooLargeError

# Exhaustive enumeration refuses hypothesis sets beyond this size.
ENUMERATION_LIMIT = 10_000_000


@dataclass(frozen=True)
class PosteriorMatrix:
    """Row-stochastic (n, k) matrix of per-observation class posteriors."""

    probs: np.ndarray
    beta: float

    def __post_init__(self):
        rows = self.probs.sum(axis=1)
        if not np.all(np.abs(rows - 1.0) <= 1e-12):
            raise NonFiniteError("posterior rows must sum to 1")


@dataclass(frozen=True)
class KernelValue:
    """Agreement kernel at one beta.

    ``raw`` is the sum of per-observation log overlaps, ``full`` adds the
    N log K hypothesis-count constant, ``per_observation`` keeps the
    addends in input row order.
    """

    raw: float
    full: float
    per_observation: np.ndarray


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta):
        raise NonFiniteError(f"beta must be finite, got {beta!r}")
    if beta < 0.0:
        raise NegativeBetaError(f"beta must be non-negative, got {beta!r}")
    return beta


def _log_posteriors(scores: np.ndarray, beta: float) -> np.ndarray:
    # max-shift keeps every exponent <= 0; an overflowing beta * score
    # turns into nan here and surfaces downstream as a Diverged error
    with np.errstate(invalid="ignore", over="ignore"):
        z = beta * scores
        z = z - z.max(axis=1, keepdims=True)
        return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def _sorted_sum(terms: np.ndarray) -> float:
    # canonical accumulation order: permutation-invariant, reproducible
    return float(np.sort(terms).sum())


def gibbs_posterior(logits: LogitMatrix, beta: float) -> PosteriorMatrix:
    """Per-observation class posteriors at inverse temperature beta."""
    beta = _check_beta(beta)
    z = beta * logits.scores
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return PosteriorMatrix(probs=e / e.sum(axis=1, keepdims=True), beta=beta)


def _per_observation_terms(pair: PairedEvaluation, beta: float) -> tuple[np.ndarray, ...]:
    lp1 = _log_posteriors(pair.first.scores, beta)
    lp2 = _log_posteriors(pair.second.scores, beta)
    m = lp1 + lp2
    mx = m.max(axis=1)
    per = mx + np.log(np.exp(m - mx[:, None]).sum(axis=1))
    return lp1, lp2, m, per


def pa_kernel(pair: PairedEvaluation, beta: float) -> KernelValue:
    """Log overlap of the two Gibbs posteriors at a fixed beta."""
    beta = _check_beta(beta)
    _, _, _, per = _per_observation_terms(pair, beta)
    raw = _sorted_sum(per)
    full = raw + pair.n * math.log(pair.k)
    return KernelValue(raw=raw, full=full, per_observation=per)


def value_and_gradient(pair: PairedEvaluation, beta: float) -> tuple[float, float]:
    """``raw`` and d(raw)/d(beta) in one pass.

    Per observation, with a and b the two logit rows and w the normalized
    elementwise product of the posteriors:

        d/dbeta log sum_j p'_j p''_j = E_w[a + b] - (E_p'[a] + E_p''[b])

    Terms are grouped symmetrically so swapping the realizations returns
    bit-identical values.
    """
    beta = _check_beta(beta)
    lp1, lp2, m, per = _per_observation_terms(pair, beta)
    a, b = pair.first.scores, pair.second.scores
    w = np.exp(m - per[:, None])
    e_joint = (w * (a + b)).sum(axis=1)
    e_first = (np.exp(lp1) * a).sum(axis=1)
    e_second = (np.exp(lp2) * b).sum(axis=1)
    grad = _sorted_sum(e_joint - (e_first + e_second))
    return _sorted_sum(per), grad


def kernel_gradient(pair: PairedEvaluation, beta: float) -> float:
    """Derivative of ``raw`` with respect to beta."""
    return value_and_gradient(pair, beta)[1]


def enumerate_kernel(pair: PairedEvaluation, beta: float) -> float:
    """Brute-force ``full`` by summing over every one of the K^N labelings.

    Serves as the independent check of :func:`pa_kernel`: the joint
    posterior probability of each labeling is materialized explicitly
    (product of per-observation class posteriors) and the overlap is
    summed term by term, never using the product-of-row-sums shortcut.
    Refuses instances with K^N > ENUMERATION_LIMIT.
    """
    from scipy.special import softmax

    beta = _check_beta(beta)
    n, k = pair.n, pair.k
    if k**n > ENUMERATION_LIMIT:
        raise TooLargeError(f"{k}^{n} labelings exceed the enumeration limit")
    p1 = softmax(beta * pair.first.scores, axis=1)
    p2 = softmax(beta * pair.second.scores, axis=1)
    q = p1 * p2
    overlap = np.array([1.0])
    for i in range(n):
        overlap = (overlap[:, None] * q[i][None, :]).ravel()
    return n * math.log(k) + math.log(overlap.sum())
