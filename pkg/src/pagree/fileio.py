"""File formats: logits CSV, power CSV, sweep tables, run configs.

All numbers are serialized with 17 significant digits so every table
round-trips bit-exactly through CSV. Output schemas carry a
``format_version`` field. Parsing reports 1-based line numbers and the
offending column.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .data import LogitMatrix
from .errors import (
    AlignmentError,
    DuplicateIdError,
    ParseError,
    ValidationError,
)
from .optimizer import OptimizerConfig
from .sweep import ShiftedPool, SweepRow, SweepTable
from .synthetic import BenchmarkCurve, SyntheticSpec

FORMAT_VERSION = 1


def _fmt(value: float | None) -> str:
    return "" if value is None else format(float(value), ".17g")


def dump_json(obj) -> str:
    """Canonical JSON used for every output: sorted keys, stable floats."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _listing(ids) -> str:
    shown = sorted(ids)
    head = ", ".join(repr(i) for i in shown[:5])
    return head + (f", ... ({len(shown)} total)" if len(shown) > 5 else "")


def _open_text(path: Path):
    try:
        return open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=str(path)) from None


# ---------------------------------------------------------------- logits CSV


def read_logits(path: str | Path) -> tuple[LogitMatrix, np.ndarray | None]:
    """Parse an ``id,label,f_0,...,f_{k-1}`` CSV.

    The label column must be fully populated (integers in [0, k)) or
    fully empty. Returns the matrix and the labels, or None when the
    file is unlabeled.
    """
    path = Path(path)
    with _open_text(path) as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", path=str(path), line=1) from None
        if len(header) < 4 or header[0] != "id" or header[1] != "label":
            raise ParseError(
                "header must be id,label,f_0,...,f_{k-1} with k >= 2",
                path=str(path),
                line=1,
            )
        k = len(header) - 2
        for j, name in enumerate(header[2:]):
            if name != f"f_{j}":
                raise ParseError(
                    f"expected score column f_{j}, got {name!r}",
                    path=str(path),
                    line=1,
                    column=name,
                )

        ids: list[str] = []
        labels_raw: list[str] = []
        rows: list[list[float]] = []
        seen: dict[str, int] = {}
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(row)}",
                    path=str(path),
                    line=line_no,
                )
            obs_id = row[0]
            if not obs_id:
                raise ParseError("empty id", path=str(path), line=line_no, column="id")
            if obs_id in seen:
                raise DuplicateIdError(
                    f"{path}:{line_no}: id {obs_id!r} already defined on line {seen[obs_id]}"
                )
            seen[obs_id] = line_no
            ids.append(obs_id)
            labels_raw.append(row[1])
            scores = []
            for j, cell in enumerate(row[2:]):
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"not a number: {cell!r}",
                        path=str(path),
                        line=line_no,
                        column=f"f_{j}",
                    ) from None
                if not math.isfinite(value):
                    raise ParseError(
                        f"score must be finite, got {cell!r}",
                        path=str(path),
                        line=line_no,
                        column=f"f_{j}",
                    )
                scores.append(value)
            rows.append(scores)

    if not rows:
        raise ParseError("no observations", path=str(path), line=1)

    labeled = [bool(cell) for cell in labels_raw]
    labels = None
    if any(labeled):
        if not all(labeled):
            bad_line = 2 + labeled.index(False)
            raise ParseError(
                "label column must be fully populated or fully empty",
                path=str(path),
                line=bad_line,
                column="label",
            )
        parsed = []
        for offset, cell in enumerate(labels_raw):
            try:
                value = int(cell)
            except ValueError:
                raise ParseError(
                    f"label must be an integer, got {cell!r}",
                    path=str(path),
                    line=2 + offset,
                    column="label",
                ) from None
            if not (0 <= value < k):
                raise ParseError(
                    f"label {value} outside [0, {k})",
                    path=str(path),
                    line=2 + offset,
                    column="label",
                )
            parsed.append(value)
        labels = np.array(parsed, dtype=np.int64)

    return LogitMatrix(np.array(rows, dtype=np.float64), ids=tuple(ids)), labels


def write_logits(path: str | Path, matrix: LogitMatrix, labels=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", "label"] + [f"f_{j}" for j in range(matrix.k)])
        for i in range(matrix.n):
            label = "" if labels is None else str(int(labels[i]))
            writer.writerow([matrix.ids[i], label] + [_fmt(v) for v in matrix.scores[i]])


# ----------------------------------------------------------------- power CSV


def read_power(path: str | Path) -> dict[str, float]:
    """Parse an ``id,power`` CSV into an id -> power mapping."""
    path = Path(path)
    with _open_text(path) as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", path=str(path), line=1) from None
        if header != ["id", "power"]:
            raise ParseError("header must be id,power", path=str(path), line=1)
        values: dict[str, float] = {}
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ParseError(
                    f"expected 2 fields, got {len(row)}", path=str(path), line=line_no
                )
            obs_id, cell = row
            if obs_id in values:
                raise DuplicateIdError(f"{path}:{line_no}: duplicate id {obs_id!r}")
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"not a number: {cell!r}", path=str(path), line=line_no, column="power"
                ) from None
            if not math.isfinite(value) or value < 0:
                raise ParseError(
                    f"power must be finite and non-negative, got {cell!r}",
                    path=str(path),
                    line=line_no,
                    column="power",
                )
            values[obs_id] = value
    return values


# ------------------------------------------------------------------ pairing


def load_pair(
    clean_path: str | Path,
    shifted_path: str | Path,
    power_path: str | Path | None = None,
    level_tag: str = "shift",
) -> ShiftedPool:
    """Join a clean and a shifted logits file by observation id.

    Shifted rows are reordered to the clean file's order. Ids present in
    only one file, class-count mismatches, or contradictory labels raise
    :class:`AlignmentError`. Labels are taken from whichever file carries
    them (both, if present, must agree).
    """
    clean, clean_labels = read_logits(clean_path)
    shifted, shifted_labels = read_logits(shifted_path)
    if clean.k != shifted.k:
        raise AlignmentError(f"class counts differ: {clean.k} vs {shifted.k}")
    clean_ids, shifted_ids = set(clean.ids), set(shifted.ids)
    if clean_ids != shifted_ids:
        parts = []
        if clean_ids - shifted_ids:
            parts.append(f"missing from shifted file: {_listing(clean_ids - shifted_ids)}")
        if shifted_ids - clean_ids:
            parts.append(f"missing from clean file: {_listing(shifted_ids - clean_ids)}")
        raise AlignmentError("; ".join(parts))

    position = {obs_id: i for i, obs_id in enumerate(shifted.ids)}
    order = np.array([position[obs_id] for obs_id in clean.ids], dtype=np.intp)
    shifted = LogitMatrix(shifted.scores[order], ids=clean.ids)
    if shifted_labels is not None:
        shifted_labels = shifted_labels[order]
    if clean_labels is not None and shifted_labels is not None:
        if not np.array_equal(clean_labels, shifted_labels):
            diff = int(np.flatnonzero(clean_labels != shifted_labels)[0])
            raise AlignmentError(f"labels disagree for id {clean.ids[diff]!r}")
    labels = clean_labels if clean_labels is not None else shifted_labels

    power = None
    if power_path is not None:
        mapping = read_power(power_path)
        file_ids = set(mapping)
        if file_ids != clean_ids:
            parts = []
            if clean_ids - file_ids:
                parts.append(f"power missing for: {_listing(clean_ids - file_ids)}")
            if file_ids - clean_ids:
                parts.append(f"power for unknown ids: {_listing(file_ids - clean_ids)}")
            raise AlignmentError("; ".join(parts))
        power = np.array([mapping[obs_id] for obs_id in clean.ids], dtype=np.float64)

    return ShiftedPool(
        clean=clean, shifted=shifted, level_tag=level_tag, power=power, labels=labels
    )


# -------------------------------------------------------------- sweep tables

SWEEP_COLUMNS = (
    "level_tag",
    "ratio",
    "pa_raw",
    "pa_theoretical",
    "beta_star",
    "afr_t",
    "accuracy_clean",
    "accuracy_shifted",
)


def write_sweep_csv(table: SweepTable, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in table.rows:
            writer.writerow(
                [row.level_tag]
                + [
                    _fmt(getattr(row, name))
                    for name in SWEEP_COLUMNS[1:]
                ]
            )


def read_sweep_csv(path: str | Path) -> SweepTable:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", path=str(path), line=1) from None
        if tuple(header) != SWEEP_COLUMNS:
            raise ParseError(
                f"header must be {','.join(SWEEP_COLUMNS)}", path=str(path), line=1
            )
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(SWEEP_COLUMNS):
                raise ParseError(
                    f"expected {len(SWEEP_COLUMNS)} fields, got {len(row)}",
                    path=str(path),
                    line=line_no,
                )
            try:
                rows.append(
                    SweepRow(
                        level_tag=row[0],
                        ratio=float(row[1]),
                        pa_raw=float(row[2]),
                        pa_theoretical=float(row[3]),
                        beta_star=float(row[4]),
                        afr_t=float(row[5]) if row[5] else None,
                        accuracy_clean=float(row[6]) if row[6] else None,
                        accuracy_shifted=float(row[7]) if row[7] else None,
                    )
                )
            except ValueError as exc:
                raise ParseError(str(exc), path=str(path), line=line_no) from None
    return SweepTable(rows=tuple(rows))


def sweep_table_to_json(table: SweepTable) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "rows": [
            {name: getattr(row, name) for name in SWEEP_COLUMNS} for row in table.rows
        ],
    }


def write_benchmark_csv(curve: BenchmarkCurve, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["classifier", "p", "pa_raw", "pa_theoretical", "beta_star", "accuracy"])
        for row in curve.rows:
            writer.writerow(
                [row.classifier]
                + [_fmt(v) for v in (row.p, row.pa_raw, row.pa_theoretical, row.beta_star, row.accuracy)]
            )


# -------------------------------------------------------------- run configs


@dataclass(frozen=True)
class RunConfig:
    """Validated sweep configuration.

    Inputs come either from a clean/shifted file pair (plus optional
    power file) or from a synthetic spec. ``subset_fallback`` allows
    interior ratios without power values by drawing a seeded uniform
    subset.
    """

    ratios: tuple[float, ...]
    output_csv: str
    output_json: str
    clean: str | None = None
    shifted: str | None = None
    power: str | None = None
    synthetic: SyntheticSpec | None = None
    optimizer: OptimizerConfig = OptimizerConfig()
    report: str = "raw"
    seed: int | None = None
    level_tag: str = "shift"
    subset_fallback: bool = False

    def __post_init__(self):
        file_input = self.clean is not None or self.shifted is not None
        if file_input and (self.clean is None or self.shifted is None):
            raise ValidationError("clean and shifted paths must be given together")
        if file_input == (self.synthetic is not None):
            raise ValidationError("config needs either clean+shifted paths or a synthetic spec")
        if not self.ratios:
            raise ValidationError("ratios must not be empty")
        for r in self.ratios:
            if not (0.0 <= r <= 1.0):
                raise ValidationError(f"ratio {r} outside [0, 1]")
        if self.report not in ("raw", "theoretical"):
            raise ValidationError(f"report must be 'raw' or 'theoretical', got {self.report!r}")
        if self.subset_fallback and self.seed is None:
            raise ValidationError("subset_fallback requires a seed")


def _build_section(cls, data: dict, section: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ValidationError(f"unknown {section} key(s): {', '.join(sorted(unknown))}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ValidationError(f"invalid {section} section: {exc}") from None


def load_run_config(path: str | Path) -> RunConfig:
    """Parse and validate a run config before any computation starts."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), path=str(path), line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ValidationError("run config must be a JSON object")

    allowed = {f.name for f in fields(RunConfig)}
    unknown = set(data) - allowed
    if unknown:
        raise ValidationError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    kwargs = dict(data)
    if "ratios" in kwargs:
        ratios = kwargs["ratios"]
        if not isinstance(ratios, list) or not all(
            isinstance(r, (int, float)) and not isinstance(r, bool) for r in ratios
        ):
            raise ValidationError("ratios must be a list of numbers")
        kwargs["ratios"] = tuple(float(r) for r in ratios)
    if "optimizer" in kwargs:
        if not isinstance(kwargs["optimizer"], dict):
            raise ValidationError("optimizer section must be a JSON object")
        kwargs["optimizer"] = _build_section(OptimizerConfig, kwargs["optimizer"], "optimizer")
    if "synthetic" in kwargs:
        if not isinstance(kwargs["synthetic"], dict):
            raise ValidationError("synthetic section must be a JSON object")
        kwargs["synthetic"] = _build_section(SyntheticSpec, kwargs["synthetic"], "synthetic")
    try:
        return RunConfig(**kwargs)
    except TypeError as exc:
        raise ValidationError(f"invalid config: {exc}") from None
