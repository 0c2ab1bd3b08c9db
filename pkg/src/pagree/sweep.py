"""Shift-ratio sweeps and agreement-based epoch selection.

A :class:`ShiftedPool` pairs a clean evaluation with a fully shifted one.
:func:`mix_by_ratio` grades the shift: at ratio r the round(r*n)
observations with the smallest perturbation power take their shifted
logits and the rest stay clean. :func:`run_sweep` maximizes agreement on
every (pool, ratio) cell and tabulates it next to the accuracy-based
measures. :func:`select_epoch` picks a training epoch by agreement alone
(no labels) or by first-realization accuracy.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import LogitMatrix, PairedEvaluation
from .errors import MissingLabelsError, MissingPowerError, ValidationError
from .measures import _check_labels, accuracy, afr_true, predictions
from .optimizer import OptimizerConfig, optimize_beta

ENV_THREADS = "PA_THREADS"


@dataclass(frozen=True)
class ShiftedPool:
    """Clean and fully-shifted logits over one observation set.

    ``power`` optionally grades how strong each observation's shift is
    (non-negative; smaller mixes in first). ``labels`` optionally carry
    the true classes for the accuracy-based columns.
    """

    clean: LogitMatrix
    shifted: LogitMatrix
    level_tag: str
    power: np.ndarray | None = None
    labels: np.ndarray | None = None

    def __post_init__(self):
        PairedEvaluation(self.clean, self.shifted)  # shape and id checks
        if self.power is not None:
            power = np.asarray(self.power, dtype=np.float64)
            if power.shape != (self.clean.n,):
                raise ValidationError(
                    f"expected {self.clean.n} power values, got shape {power.shape}"
                )
            if not np.all(np.isfinite(power)) or power.min() < 0:
                raise ValidationError("power values must be finite and non-negative")
            power.setflags(write=False)
            object.__setattr__(self, "power", power)
        if self.labels is not None:
            object.__setattr__(
                self, "labels", _check_labels(self.labels, self.clean.n, self.clean.k)
            )

    @property
    def n(self) -> int:
        return self.clean.n


def _shift_count(ratio: float, n: int) -> int:
    # round-half-up keeps the count platform-independent
    return int(math.floor(ratio * n + 0.5))


def mix_by_ratio(
    pool: ShiftedPool,
    ratio: float,
    subset_seed: int | None = None,
) -> PairedEvaluation:
    """Pair the clean matrix with a partially shifted copy.

    At interior ratios the round(ratio*n) observations with the smallest
    power take their shifted rows (power ties broken by id). Without
    power values an interior ratio raises :class:`MissingPowerError`
    unless ``subset_seed`` explicitly requests a seeded uniform subset.
    Ratios 0 and 1 never need power.
    """
    if not (0.0 <= ratio <= 1.0):
        raise ValidationError(f"ratio must lie in [0, 1], got {ratio}")
    if ratio == 0.0:
        return PairedEvaluation(pool.clean, pool.clean)
    if ratio == 1.0:
        return PairedEvaluation(pool.clean, pool.shifted)
    count = _shift_count(ratio, pool.n)
    if pool.power is not None:
        order = sorted(range(pool.n), key=lambda i: (pool.power[i], pool.clean.ids[i]))
        chosen = order[:count]
    elif subset_seed is not None:
        chosen = np.random.default_rng(subset_seed).permutation(pool.n)[:count]
    else:
        raise MissingPowerError(
            f"ratio {ratio} needs per-observation power values "
            "(or an explicit subset_seed for a uniform subset)"
        )
    scores = pool.clean.scores.copy()
    scores[np.asarray(chosen, dtype=np.intp)] = pool.shifted.scores[
        np.asarray(chosen, dtype=np.intp)
    ]
    return PairedEvaluation(pool.clean, LogitMatrix(scores, ids=pool.clean.ids))


@dataclass(frozen=True)
class SweepRow:
    level_tag: str
    ratio: float
    pa_raw: float
    pa_theoretical: float
    beta_star: float
    afr_t: float | None
    accuracy_clean: float | None
    accuracy_shifted: float | None


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]


def _worker_count(cells: int) -> int:
    raw = os.environ.get(ENV_THREADS, "0")
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValidationError(f"{ENV_THREADS} must be >= 0, got {cap}")
    auto = os.cpu_count() or 1
    return max(1, min(cells, cap if cap > 0 else auto))


def run_sweep(
    pools: Sequence[ShiftedPool],
    ratios: Sequence[float],
    config: OptimizerConfig | None = None,
    subset_seed: int | None = None,
) -> SweepTable:
    """Agreement and accuracy measures for every (pool, ratio) cell.

    Rows keep the pools in input order with ratios sorted ascending.
    Cells are independent and evaluated concurrently (capped by the
    PA_THREADS environment variable, 0 meaning auto); each cell is pure,
    so results are identical for any worker count.
    """
    config = config or OptimizerConfig()
    ordered = sorted(float(r) for r in ratios)
    if not ordered:
        raise ValidationError("ratios must not be empty")
    cells = [(pool, ratio) for pool in pools for ratio in ordered]

    def run_cell(cell: tuple[ShiftedPool, float]) -> SweepRow:
        pool, ratio = cell
        pair = mix_by_ratio(pool, ratio, subset_seed=subset_seed)
        solution = optimize_beta(pair, config)
        afr = acc_clean = acc_shifted = None
        if pool.labels is not None:
            clean_preds = predictions(pool.clean, pool.labels)
            mixed_preds = predictions(pair.second, pool.labels)
            afr = afr_true(clean_preds, mixed_preds)
            acc_clean = accuracy(clean_preds)
            acc_shifted = accuracy(mixed_preds)
        return SweepRow(
            level_tag=pool.level_tag,
            ratio=ratio,
            pa_raw=solution.pa_raw,
            pa_theoretical=solution.pa_theoretical,
            beta_star=solution.beta_star,
            afr_t=afr,
            accuracy_clean=acc_clean,
            accuracy_shifted=acc_shifted,
        )

    workers = _worker_count(len(cells))
    if workers == 1:
        rows = [run_cell(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool_exec:
            rows = list(pool_exec.map(run_cell, cells))
    return SweepTable(rows=tuple(rows))


@dataclass(frozen=True)
class EpochScore:
    epoch: int
    pa_raw: float
    pa_theoretical: float
    beta_star: float
    accuracy: float | None


@dataclass(frozen=True)
class EpochSelection:
    criterion: str
    selected_epoch: int
    scores: tuple[EpochScore, ...]


def select_epoch(
    epochs: Sequence[PairedEvaluation],
    criterion: str,
    labels=None,
    config: OptimizerConfig | None = None,
) -> EpochSelection:
    """Pick the epoch maximizing agreement or first-realization accuracy.

    The "pa" criterion never touches labels. The "accuracy" criterion
    requires them and scores each epoch's first realization. Ties go to
    the earliest epoch. A per-epoch score table is returned either way.
    """
    if criterion not in ("pa", "accuracy"):
        raise ValidationError(f"criterion must be 'pa' or 'accuracy', got {criterion!r}")
    if not epochs:
        raise ValidationError("need at least one epoch")
    if criterion == "accuracy" and labels is None:
        raise MissingLabelsError("accuracy criterion requires labels")
    config = config or OptimizerConfig()

    scores: list[EpochScore] = []
    for index, pair in enumerate(epochs):
        solution = optimize_beta(pair, config)
        acc = None
        if labels is not None:
            acc = accuracy(predictions(pair.first, labels))
        scores.append(
            EpochScore(
                epoch=index,
                pa_raw=solution.pa_raw,
                pa_theoretical=solution.pa_theoretical,
                beta_star=solution.beta_star,
                accuracy=acc,
            )
        )
    if criterion == "pa":
        ranking = [s.pa_raw for s in scores]
    else:
        ranking = [s.accuracy for s in scores]
    selected = int(np.argmax(ranking))
    return EpochSelection(criterion=criterion, selected_epoch=selected, scores=tuple(scores))
