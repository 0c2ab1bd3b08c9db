"""Accuracy-based comparison measures and confidence reporting.

These are the label-dependent counterparts to the agreement kernel:
argmax predictions with unit-temperature confidences, plain accuracy,
the true-label flip rate between a clean and a shifted evaluation, and
binned confidence reports over selectable populations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import LogitMatrix
from .errors import (
    LabelOutOfRangeError,
    MisalignedError,
    MissingLabelsError,
    ValidationError,
)

HISTOGRAM_BIN_WIDTH = 0.05

POPULATIONS = ("clean-correct", "attacked-success")


@dataclass(frozen=True)
class LabeledPredictions:
    """Argmax predictions with confidences for one evaluation.

    ``predicted`` holds 0-based class indices (ties go to the lowest
    index), ``confidence`` the unit-temperature softmax probability of
    the predicted class, always in [1/k, 1].
    """

    ids: tuple[str, ...]
    k: int
    predicted: np.ndarray
    confidence: np.ndarray
    true_label: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.predicted.shape[0]


@dataclass(frozen=True)
class ConfidenceReport:
    """Histogram summary of prediction confidences for one population.

    Bins have fixed width 0.05 on [0, 1]. ``mean`` is None when the
    population is empty; ``standard_error`` additionally needs at least
    two members (sample standard deviation over sqrt(n)).
    """

    population: str
    counts: np.ndarray
    bin_edges: np.ndarray
    n: int
    mean: float | None
    standard_error: float | None


def _check_labels(labels, n: int, k: int) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.shape != (n,):
        raise ValidationError(f"expected {n} labels, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            raise LabelOutOfRangeError("labels must be integers")
        arr = arr.astype(np.int64)
    arr = arr.astype(np.int64)
    if arr.min() < 0 or arr.max() >= k:
        bad = arr[(arr < 0) | (arr >= k)][0]
        raise LabelOutOfRangeError(f"label {bad} outside [0, {k})")
    arr.setflags(write=False)
    return arr


def predictions(logits: LogitMatrix, labels=None) -> LabeledPredictions:
    """Argmax predictions plus unit-temperature confidence per row."""
    scores = logits.scores
    predicted = np.argmax(scores, axis=1)
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    probs = e / e.sum(axis=1, keepdims=True)
    confidence = probs[np.arange(logits.n), predicted]
    true_label = None if labels is None else _check_labels(labels, logits.n, logits.k)
    predicted.setflags(write=False)
    confidence.setflags(write=False)
    return LabeledPredictions(
        ids=logits.ids,
        k=logits.k,
        predicted=predicted,
        confidence=confidence,
        true_label=true_label,
    )


def _check_aligned(clean: LabeledPredictions, shifted: LabeledPredictions) -> None:
    if clean.n != shifted.n or clean.k != shifted.k:
        raise MisalignedError(
            f"predictions disagree on shape: {clean.n}x{clean.k} vs {shifted.n}x{shifted.k}"
        )
    if clean.ids != shifted.ids:
        raise MisalignedError("predictions cover different observation ids")


def accuracy(preds: LabeledPredictions) -> float:
    """Fraction of predictions equal to the true label."""
    if preds.true_label is None:
        raise MissingLabelsError("accuracy requires true labels")
    return float(np.mean(preds.predicted == preds.true_label))


def afr_true(clean: LabeledPredictions, shifted: LabeledPredictions) -> float:
    """True-label adversarial failure rate: 1 - (flips / clean-correct).

    A flip is an observation the clean evaluation got right and the
    shifted one got wrong. With no clean-correct observations the rate is
    vacuously 1.0 (a warning is emitted). Not symmetric in its arguments.
    """
    if clean.true_label is None or shifted.true_label is None:
        raise MissingLabelsError("afr_true requires true labels on both evaluations")
    _check_aligned(clean, shifted)
    if not np.array_equal(clean.true_label, shifted.true_label):
        raise MisalignedError("true labels differ between the two evaluations")
    correct = clean.predicted == clean.true_label
    denom = int(correct.sum())
    if denom == 0:
        warnings.warn("no clean-correct observations; afr_true is vacuously 1.0")
        return 1.0
    flips = int(np.sum(correct & (shifted.predicted != shifted.true_label)))
    return 1.0 - flips / denom


def confidence_report(
    clean: LabeledPredictions,
    shifted: LabeledPredictions,
    population: str,
) -> ConfidenceReport:
    """Binned confidence summary over one of two populations.

    ``clean-correct`` selects observations the clean evaluation labeled
    correctly and reports their clean confidences. ``attacked-success``
    selects observations whose shifted prediction differs from the clean
    one (no labels needed) and reports the shifted confidences.
    """
    if population not in POPULATIONS:
        raise ValidationError(f"population must be one of {POPULATIONS}, got {population!r}")
    _check_aligned(clean, shifted)
    if population == "clean-correct":
        if clean.true_label is None:
            raise MissingLabelsError("clean-correct population requires true labels")
        mask = clean.predicted == clean.true_label
        values = clean.confidence[mask]
    else:
        mask = shifted.predicted != clean.predicted
        values = shifted.confidence[mask]

    edges = np.linspace(0.0, 1.0, int(round(1.0 / HISTOGRAM_BIN_WIDTH)) + 1)
    counts, _ = np.histogram(values, bins=edges)
    n = int(values.size)
    mean = float(values.mean()) if n else None
    se = float(values.std(ddof=1) / np.sqrt(n)) if n >= 2 else None
    counts.setflags(write=False)
    edges.setflags(write=False)
    return ConfidenceReport(
        population=population,
        counts=counts,
        bin_edges=edges,
        n=n,
        mean=mean,
        standard_error=se,
    )
