"""Sweep a graded shift pool and print agreement against flip rate.

Builds a binary pool where every shifted row flips the clean argmax but
with heterogeneous margins, so rows differ in how damaging their shift
is. Power grades the rows; the sweep mixes the weakest shifts in first
and both pa columns fall while AFR_T tracks the surviving fraction.
"""

import argparse
import sys

import numpy as np

from pagree import LogitMatrix, OptimizerConfig, ShiftedPool, run_sweep


def graded_pool(n, top_margin):
    # margins 1..top spread evenly; shifted rows flip the argmax
    classes = np.arange(n) % 2
    margins = np.linspace(1.0, top_margin, n)
    signs = np.where(classes[:, None] == np.arange(2)[None, :], 1.0, -1.0)
    clean = signs * margins[:, None]
    return ShiftedPool(
        clean=LogitMatrix(clean),
        shifted=LogitMatrix(-clean),
        level_tag="graded-flip",
        power=margins,
        labels=classes,
    )


def parse_args(argv):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=60, help="pool size")
    parser.add_argument("--top-margin", type=float, default=6.0, help="largest logit margin")
    parser.add_argument(
        "--ratios",
        type=float,
        nargs="+",
        default=[round(0.1 * j, 1) for j in range(11)],
        help="shift ratios to evaluate",
    )
    parser.add_argument("--epochs", type=int, default=None, help="override optimizer epochs")
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv if argv is not None else sys.argv[1:])
    pool = graded_pool(args.n, args.top_margin)
    config = OptimizerConfig(epochs=args.epochs) if args.epochs else None
    table = run_sweep([pool], args.ratios, config=config)

    print(f"{'ratio':>6}  {'pa_raw':>12}  {'pa_theoretical':>15}  {'beta*':>8}  {'afr_t':>6}")
    for row in table.rows:
        print(
            f"{row.ratio:6.2f}  {row.pa_raw:12.4f}  {row.pa_theoretical:15.6f}"
            f"  {row.beta_star:8.4f}  {row.afr_t:6.3f}"
        )
    raws = [row.pa_raw for row in table.rows]
    print()
    print(f"pa_raw non-increasing over the sweep: {all(b <= a for a, b in zip(raws, raws[1:]))}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
