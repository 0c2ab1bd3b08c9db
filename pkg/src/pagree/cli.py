"""Command-line interface.

Subcommands: compute, sweep, synthetic, select, confidence. Exit codes:
0 on success, 2 on input errors, 3 on numerical failure; diagnostics go
to stderr as a single line.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .data import PairedEvaluation
from .errors import AlignmentError, InputError, MissingLabelsError, NumericalError, ParseError
from .fileio import (
    FORMAT_VERSION,
    dump_json,
    load_pair,
    load_run_config,
    sweep_table_to_json,
    write_benchmark_csv,
    write_sweep_csv,
)
from .measures import POPULATIONS, confidence_report, predictions
from .optimizer import BetaSolution, OptimizerConfig, optimize_beta
from .sweep import ShiftedPool, run_sweep, select_epoch
from .synthetic import PRNG_NAME, benchmark_curve, classifier_logits, generate_targets


def _optimizer_from(args) -> OptimizerConfig:
    return OptimizerConfig(
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        beta_init=args.beta_init,
        parametrization=args.parametrization,
    )


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epochs", type=int, default=OptimizerConfig.epochs)
    parser.add_argument("--learning-rate", type=float, default=OptimizerConfig.learning_rate)
    parser.add_argument("--beta-init", type=float, default=OptimizerConfig.beta_init)
    parser.add_argument(
        "--parametrization", choices=("log", "projected"), default=OptimizerConfig.parametrization
    )


def _emit(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _write_trajectory(solution: BetaSolution, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["step", "beta", "objective"])
        for step, beta, objective in solution.trajectory:
            writer.writerow([step, format(beta, ".17g"), format(objective, ".17g")])


def _cmd_compute(args) -> int:
    pool = load_pair(args.clean, args.shifted)
    pair = PairedEvaluation(pool.clean, pool.shifted)
    solution = optimize_beta(pair, _optimizer_from(args))
    result = {
        "format_version": FORMAT_VERSION,
        "pa_raw": solution.pa_raw,
        "pa_theoretical": solution.pa_theoretical,
        "beta_star": solution.beta_star,
        "n": pair.n,
        "k": pair.k,
    }
    if args.trajectory:
        _write_trajectory(solution, args.trajectory)
        result["trajectory_path"] = args.trajectory
    _emit(dump_json(result), args.out)
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_run_config(args.config)
    if cfg.synthetic is not None:
        targets = generate_targets(cfg.synthetic)
        pair = classifier_logits(targets, cfg.synthetic)
        pool = ShiftedPool(
            clean=pair.first, shifted=pair.second, level_tag=cfg.level_tag, labels=targets
        )
    else:
        pool = load_pair(cfg.clean, cfg.shifted, cfg.power, level_tag=cfg.level_tag)
    table = run_sweep(
        [pool],
        cfg.ratios,
        cfg.optimizer,
        subset_seed=cfg.seed if cfg.subset_fallback else None,
    )
    write_sweep_csv(table, cfg.output_csv)
    Path(cfg.output_json).write_text(dump_json(sweep_table_to_json(table)), encoding="utf-8")
    summary = {
        "format_version": FORMAT_VERSION,
        "rows": len(table.rows),
        "report": cfg.report,
        "output_csv": cfg.output_csv,
        "output_json": cfg.output_json,
    }
    sys.stdout.write(dump_json(summary))
    return 0


def _cmd_synthetic(args) -> int:
    try:
        grid = [float(part) for part in args.p_grid.split(",") if part.strip() != ""]
    except ValueError:
        raise ParseError(f"--p-grid must be comma-separated numbers, got {args.p_grid!r}") from None
    curve = benchmark_curve(
        n=args.n,
        p_grid=grid,
        margin=args.margin,
        seed=args.seed,
        config=_optimizer_from(args),
    )
    write_benchmark_csv(curve, args.out)
    meta = {
        "format_version": FORMAT_VERSION,
        "rows": len(curve.rows),
        "seed": curve.seed,
        "prng": PRNG_NAME,
        "out": args.out,
    }
    sys.stdout.write(dump_json(meta))
    return 0


def _cmd_select(args) -> int:
    try:
        manifest = json.loads(Path(args.pairs).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=args.pairs) from None
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), path=args.pairs, line=exc.lineno) from None
    if not isinstance(manifest, list) or not all(
        isinstance(e, dict) and set(e) == {"first", "second"} for e in manifest
    ):
        raise ParseError(
            'manifest must be a JSON list of {"first": path, "second": path}', path=args.pairs
        )
    epochs = []
    labels = None
    for index, entry in enumerate(manifest):
        pool = load_pair(entry["first"], entry["second"])
        epochs.append(PairedEvaluation(pool.clean, pool.shifted))
        if args.criterion == "accuracy":
            if pool.labels is None:
                raise MissingLabelsError(f"epoch {index} carries no labels")
            if labels is None:
                labels = pool.labels
            elif not np.array_equal(labels, pool.labels):
                raise AlignmentError(f"epoch {index} labels disagree with epoch 0")
    selection = select_epoch(epochs, args.criterion, labels=labels, config=_optimizer_from(args))
    result = {
        "format_version": FORMAT_VERSION,
        "criterion": selection.criterion,
        "selected_epoch": selection.selected_epoch,
        "scores": [
            {
                "epoch": s.epoch,
                "pa_raw": s.pa_raw,
                "pa_theoretical": s.pa_theoretical,
                "beta_star": s.beta_star,
                "accuracy": s.accuracy,
            }
            for s in selection.scores
        ],
    }
    _emit(dump_json(result), args.out)
    return 0


def _cmd_confidence(args) -> int:
    pool = load_pair(args.clean, args.shifted)
    clean_preds = predictions(pool.clean, pool.labels)
    shifted_preds = predictions(pool.shifted, pool.labels)
    report = confidence_report(clean_preds, shifted_preds, args.population)
    result = {
        "format_version": FORMAT_VERSION,
        "population": report.population,
        "n": report.n,
        "mean": report.mean,
        "standard_error": report.standard_error,
        "counts": [int(c) for c in report.counts],
        "bin_edges": [float(e) for e in report.bin_edges],
    }
    _emit(dump_json(result), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pagree",
        description="Posterior agreement robustness measures for paired classifier logits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="maximize agreement for one clean/shifted pair")
    compute.add_argument("--clean", required=True)
    compute.add_argument("--shifted", required=True)
    compute.add_argument("--trajectory", help="write the optimization trajectory CSV here")
    compute.add_argument("--out")
    _add_optimizer_flags(compute)
    compute.set_defaults(func=_cmd_compute)

    sweep = sub.add_parser("sweep", help="run a ratio sweep from a JSON config")
    sweep.add_argument("--config", required=True)
    sweep.set_defaults(func=_cmd_sweep)

    synthetic = sub.add_parser("synthetic", help="three-classifier synthetic benchmark table")
    synthetic.add_argument("--n", type=int, required=True)
    synthetic.add_argument("--p-grid", required=True, help="comma-separated Bernoulli rates")
    synthetic.add_argument("--margin", type=float, default=1.0)
    synthetic.add_argument("--seed", type=int, default=0)
    synthetic.add_argument("--out", required=True)
    _add_optimizer_flags(synthetic)
    synthetic.set_defaults(func=_cmd_synthetic)

    select = sub.add_parser("select", help="pick the best epoch from paired logit files")
    select.add_argument("--pairs", required=True, help="JSON manifest of first/second file pairs")
    select.add_argument("--criterion", choices=("pa", "accuracy"), default="pa")
    select.add_argument("--out")
    _add_optimizer_flags(select)
    select.set_defaults(func=_cmd_select)

    confidence = sub.add_parser("confidence", help="binned confidence report for one population")
    confidence.add_argument("--clean", required=True)
    confidence.add_argument("--shifted", required=True)
    confidence.add_argument("--population", choices=POPULATIONS, required=True)
    confidence.add_argument("--out")
    confidence.set_defaults(func=_cmd_confidence)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
