"""Learning-augmented online list labeling.

Sorted sparse arrays (packed-memory arrays, classic and adaptive) wrapped by
a rank-prediction-aware allocator, plus the rank predictors and benchmark
harness used to evaluate them on real and synthetic insertion streams.
"""

from .core import (
    SCALE,
    MIN_KEY,
    MIN_RAW,
    BlackBoxLLA,
    CapacityError,
    Key,
    LabeledArray,
    MovementLedger,
    ParseError,
    UndefinedCostError,
    fixed_point_parse,
    format_raw,
    record_movements,
    verify_sorted,
)
from .pma import DEFAULT_THRESHOLDS, Pma, PmaThresholds, plan_layout, rho_at_depth, tau_at_depth
from .apma import Apma
from .learned import LearnedLLA, witness_error_check
from .predictors import (
    PredictionVector,
    SequenceSlice,
    best_fit_slope,
    corrupt,
    empirical_rank,
    predictor1,
    predictor2,
    select_predictor,
)
from .harness import (
    STRUCTURES,
    ConfigError,
    DataError,
    DatasetSpec,
    ExperimentResult,
    emit_csv,
    load_dataset,
    run_learning_curve,
    run_robustness,
    run_scaling,
    run_synthetic,
    run_table,
)

__all__ = [
    "SCALE",
    "MIN_KEY",
    "MIN_RAW",
    "BlackBoxLLA",
    "CapacityError",
    "Key",
    "LabeledArray",
    "MovementLedger",
    "ParseError",
    "UndefinedCostError",
    "fixed_point_parse",
    "format_raw",
    "record_movements",
    "verify_sorted",
    "DEFAULT_THRESHOLDS",
    "Pma",
    "PmaThresholds",
    "plan_layout",
    "rho_at_depth",
    "tau_at_depth",
    "Apma",
    "LearnedLLA",
    "witness_error_check",
    "PredictionVector",
    "SequenceSlice",
    "best_fit_slope",
    "corrupt",
    "empirical_rank",
    "predictor1",
    "predictor2",
    "select_predictor",
    "STRUCTURES",
    "ConfigError",
    "DataError",
    "DatasetSpec",
    "ExperimentResult",
    "emit_csv",
    "load_dataset",
    "run_learning_curve",
    "run_robustness",
    "run_scaling",
    "run_synthetic",
    "run_table",
]
