"""Synthetic two-class benchmark with three reference classifiers.

Targets are seeded Bernoulli draws. Three classifiers with known
behavior span the agreement/accuracy plane:

* ``perfect``: outputs the targets themselves (max agreement, max accuracy),
* ``constant``: always predicts class 0 (max agreement, chance-level accuracy),
* ``random-permutation``: outputs a seeded shuffle of the targets
  (agreement drops with the induced mismatch fraction).

Predictions are encoded as one-hot-style logit rows (+margin at the
predicted class, -margin at the other), and the paired realizations are
(targets as reference predictions, classifier outputs).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import LogitMatrix, PairedEvaluation
from .errors import ValidationError
from .optimizer import BetaSolution, OptimizerConfig, optimize_beta

CLASSIFIERS = ("perfect", "constant", "random-permutation")

# np.random.default_rng under the hood; recorded in curve metadata
PRNG_NAME = "PCG64"


@dataclass(frozen=True)
class SyntheticSpec:
    """Settings for one synthetic instance."""

    n: int
    p: float
    margin: float = 1.0
    seed: int = 0
    classifier: str = "perfect"

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if not (0.0 <= self.p <= 1.0):
            raise ValidationError(f"p must lie in [0, 1], got {self.p}")
        if not (self.margin > 0):
            raise ValidationError(f"margin must be positive, got {self.margin}")
        if self.classifier not in CLASSIFIERS:
            raise ValidationError(
                f"classifier must be one of {CLASSIFIERS}, got {self.classifier!r}"
            )


def generate_targets(spec: SyntheticSpec) -> np.ndarray:
    """Length-n vector of Bernoulli(p) targets, deterministic in the seed."""
    rng = np.random.default_rng(spec.seed)
    targets = (rng.random(spec.n) < spec.p).astype(np.int64)
    targets.setflags(write=False)
    return targets


def _encode(labels: np.ndarray, margin: float) -> LogitMatrix:
    scores = np.where(labels[:, None] == np.arange(2)[None, :], margin, -margin)
    return LogitMatrix(scores.astype(np.float64))


def _permute_rows(matrix: LogitMatrix, perm: np.ndarray) -> LogitMatrix:
    # rows move, ids stay: same observations, reshuffled outputs
    return LogitMatrix(matrix.scores[perm], ids=matrix.ids)


def classifier_logits(targets: np.ndarray, spec: SyntheticSpec) -> PairedEvaluation:
    """Paired logit realizations for the configured classifier."""
    targets = np.asarray(targets, dtype=np.int64)
    if targets.shape != (spec.n,):
        raise ValidationError(f"expected {spec.n} targets, got shape {targets.shape}")
    if targets.min(initial=0) < 0 or targets.max(initial=0) > 1:
        raise ValidationError("targets must be binary")
    if spec.classifier == "constant":
        reference = _encode(np.zeros(spec.n, dtype=np.int64), spec.margin)
        return PairedEvaluation(reference, reference)
    reference = _encode(targets, spec.margin)
    if spec.classifier == "perfect":
        return PairedEvaluation(reference, reference)
    # random-permutation: independent stream from the targets draw
    perm = np.random.default_rng([spec.seed, 1]).permutation(spec.n)
    return PairedEvaluation(reference, _permute_rows(reference, perm))


@dataclass(frozen=True)
class BenchmarkRow:
    classifier: str
    p: float
    pa_raw: float
    pa_theoretical: float
    beta_star: float
    accuracy: float


@dataclass(frozen=True)
class BenchmarkCurve:
    """Agreement and accuracy per (classifier, p) cell, plus provenance."""

    rows: tuple[BenchmarkRow, ...]
    seed: int
    prng: str = PRNG_NAME


def _child_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def benchmark_curve(
    n: int,
    p_grid: Sequence[float],
    margin: float = 1.0,
    seed: int = 0,
    config: OptimizerConfig | None = None,
) -> BenchmarkCurve:
    """Sweep all three classifiers over a grid of Bernoulli rates.

    Each p gets one target draw shared by all classifiers; agreement is
    maximized with :func:`optimize_beta` and accuracy is the classifier's
    output against the targets. Deterministic given the seed.
    """
    config = config or OptimizerConfig()
    grid = sorted(float(p) for p in p_grid)
    if not grid:
        raise ValidationError("p_grid must not be empty")
    rows: list[BenchmarkRow] = []
    for classifier in CLASSIFIERS:
        for j, p in enumerate(grid):
            spec = SyntheticSpec(
                n=n, p=p, margin=margin, seed=_child_seed(seed, j), classifier=classifier
            )
            targets = generate_targets(spec)
            pair = classifier_logits(targets, spec)
            solution: BetaSolution = optimize_beta(pair, config)
            outputs = np.argmax(pair.second.scores, axis=1)
            rows.append(
                BenchmarkRow(
                    classifier=classifier,
                    p=p,
                    pa_raw=solution.pa_raw,
                    pa_theoretical=solution.pa_theoretical,
                    beta_star=solution.beta_star,
                    accuracy=float(np.mean(outputs == targets)),
                )
            )
    return BenchmarkCurve(rows=tuple(rows), seed=seed)
