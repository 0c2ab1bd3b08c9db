"""Core containers: per-observation logit matrices and paired evaluations.

A :class:`LogitMatrix` holds the raw scores a classifier assigned to each
observation of one data realization. A :class:`PairedEvaluation` holds two
such matrices over the same observations (e.g. clean and shifted inputs)
and is the unit every agreement computation consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateIdError, MisalignedError, NonFiniteError, ValidationError


def default_ids(n: int) -> tuple[str, ...]:
    """Zero-padded decimal ids so lexicographic order equals row order."""
    width = len(str(n - 1)) if n > 1 else 1
    return tuple(f"{i:0{width}d}" for i in range(n))


@dataclass(frozen=True)
class LogitMatrix:
    """(n, k) float64 score matrix with one opaque string id per row.

    Rows are observations, columns are classes. Scores must be finite,
    n >= 1 and k >= 2; ids must be unique. The array is copied and frozen
    so instances behave as values.
    """

    scores: np.ndarray
    ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        scores = np.array(self.scores, dtype=np.float64, copy=True)
        if scores.ndim != 2:
            raise ValidationError(f"scores must be 2-dimensional, got ndim={scores.ndim}")
        n, k = scores.shape
        if n < 1:
            raise ValidationError("need at least one observation")
        if k < 2:
            raise ValidationError(f"need at least two classes, got k={k}")
        if not np.all(np.isfinite(scores)):
            bad = int(np.flatnonzero(~np.isfinite(scores).all(axis=1))[0])
            raise NonFiniteError(f"non-finite score in row {bad}")
        scores.setflags(write=False)
        ids = tuple(str(i) for i in self.ids) if self.ids else default_ids(n)
        if len(ids) != n:
            raise ValidationError(f"got {len(ids)} ids for {n} rows")
        if len(set(ids)) != n:
            seen: set[str] = set()
            dup = next(i for i in ids if i in seen or seen.add(i))
            raise DuplicateIdError(f"duplicate observation id {dup!r}")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    @property
    def k(self) -> int:
        return self.scores.shape[1]


@dataclass(frozen=True)
class PairedEvaluation:
    """Two logit matrices over the same observations, row-aligned by id."""

    first: LogitMatrix
    second: LogitMatrix

    def __post_init__(self):
        a, b = self.first, self.second
        if a.n != b.n or a.k != b.k:
            raise MisalignedError(
                f"shape mismatch: first is {a.n}x{a.k}, second is {b.n}x{b.k}"
            )
        if a.ids != b.ids:
            off = next(i for i, (x, y) in enumerate(zip(a.ids, b.ids)) if x != y)
            raise MisalignedError(
                f"ids disagree at row {off}: {a.ids[off]!r} vs {b.ids[off]!r}"
            )

    @property
    def n(self) -> int:
        return self.first.n

    @property
    def k(self) -> int:
        return self.first.k

    def swapped(self) -> "PairedEvaluation":
        return PairedEvaluation(self.second, self.first)
