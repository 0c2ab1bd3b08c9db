"""Posterior agreement robustness measures for classifiers under covariate shift.

Given two logit matrices for the same observations (a clean and a
shifted realization), the package computes how well the induced Gibbs
posteriors over labelings agree, maximized over the inverse temperature.
Accuracy-based comparison measures, a synthetic benchmark, shift-ratio
sweeps and agreement-based epoch selection sit on top.
"""

from . import errors
from .data import LogitMatrix, PairedEvaluation, default_ids
from .fileio import (
    FORMAT_VERSION,
    RunConfig,
    load_pair,
    load_run_config,
    read_logits,
    read_power,
    read_sweep_csv,
    sweep_table_to_json,
    write_benchmark_csv,
    write_logits,
    write_sweep_csv,
)
from .kernel import (
    ENUMERATION_LIMIT,
    KernelValue,
    PosteriorMatrix,
    enumerate_kernel,
    gibbs_posterior,
    kernel_gradient,
    pa_kernel,
    value_and_gradient,
)
from .measures import (
    ConfidenceReport,
    LabeledPredictions,
    accuracy,
    afr_true,
    confidence_report,
    predictions,
)
from .optimizer import BetaSolution, OptimizerConfig, bracket_beta, optimize_beta
from .sweep import (
    EpochScore,
    EpochSelection,
    ShiftedPool,
    SweepRow,
    SweepTable,
    mix_by_ratio,
    run_sweep,
    select_epoch,
)
from .synthetic import (
    CLASSIFIERS,
    BenchmarkCurve,
    BenchmarkRow,
    SyntheticSpec,
    benchmark_curve,
    classifier_logits,
    generate_targets,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkCurve",
    "BenchmarkRow",
    "BetaSolution",
    "CLASSIFIERS",
    "ConfidenceReport",
    "ENUMERATION_LIMIT",
    "EpochScore",
    "EpochSelection",
    "FORMAT_VERSION",
    "KernelValue",
    "LabeledPredictions",
    "LogitMatrix",
    "OptimizerConfig",
    "PairedEvaluation",
    "PosteriorMatrix",
    "RunConfig",
    "ShiftedPool",
    "SweepRow",
    "SweepTable",
    "SyntheticSpec",
    "accuracy",
    "afr_true",
    "benchmark_curve",
    "bracket_beta",
    "classifier_logits",
    "confidence_report",
    "default_ids",
    "enumerate_kernel",
    "errors",
    "generate_targets",
    "gibbs_posterior",
    "kernel_gradient",
    "load_pair",
    "load_run_config",
    "mix_by_ratio",
    "optimize_beta",
    "pa_kernel",
    "predictions",
    "read_logits",
    "read_power",
    "read_sweep_csv",
    "run_sweep",
    "select_epoch",
    "sweep_table_to_json",
    "value_and_gradient",
    "write_benchmark_csv",
    "write_logits",
    "write_sweep_csv",
]
