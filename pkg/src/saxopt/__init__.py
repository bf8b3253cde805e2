"""Breakpoint and segment-weight optimization for symbolic time-series
representations, evaluated through 1-NN classification."""

__version__ = "0.1.0"

from .core import (
    BreakpointSet,
    DistTable,
    PAAVector,
    SymbolicWord,
    TimeSeries,
    build_dist_table,
    discretize,
    gaussian_breakpoints,
    mindist,
    paa,
    weighted_mindist,
    znormalize,
)
from .de import Candidate, DEConfig, EvolveResult, FitnessFunction, evolve
from .classify import (
    Dataset,
    RepresentationParams,
    encode_dataset,
    holdout_error,
    loo_error,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    FitResult,
    run_baseline_sax,
    run_comparison,
    run_one_step,
    run_two_step,
    write_report,
)
from .data import (
    DatasetRegistry,
    generate_synthetic,
    parse_ucr,
    write_ucr,
)

__all__ = [
    "BreakpointSet",
    "Candidate",
    "DEConfig",
    "Dataset",
    "DatasetRegistry",
    "DistTable",
    "EvolveResult",
    "ExperimentConfig",
    "ExperimentReport",
    "FitResult",
    "FitnessFunction",
    "PAAVector",
    "RepresentationParams",
    "SymbolicWord",
    "TimeSeries",
    "build_dist_table",
    "discretize",
    "encode_dataset",
    "evolve",
    "gaussian_breakpoints",
    "generate_synthetic",
    "holdout_error",
    "loo_error",
    "mindist",
    "paa",
    "parse_ucr",
    "run_baseline_sax",
    "run_comparison",
    "run_one_step",
    "run_two_step",
    "weighted_mindist",
    "write_report",
    "write_ucr",
    "znormalize",
]
