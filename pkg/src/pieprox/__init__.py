"""Proximal operators for the piece-wise exponential penalty and a zoo of
companion sparsity penalties, plus an ISTA solver and a compressed-sensing
benchmark harness."""

from .lambertw import w0, w0_array, wm1, wm1_array
from .penalties import (
    KINDS,
    PenaltySpec,
    log_prox_breakpoint,
    penalty_value,
    penalty_value_vec,
    prox_scalar,
    prox_values,
    scaled_prox_values,
    weak_convexity_rho,
)
from .pie import (
    PieParams,
    ProxSet,
    ThresholdResult,
    L_derivatives,
    iota_constant,
    objective_L,
    pie_prox_values,
    prox_pie,
    prox_pie_select,
    t_operator,
    t_operator_baseline,
    t_operator_refined,
    threshold_bar_tau,
    x1_candidate,
)
from .sensing import (
    MatrixKind,
    SignalSpec,
    gen_matrix,
    gen_signal,
    is_success,
    matrix_to_csv,
    mutual_coherence,
    relative_error,
    trial_seeds,
    vector_to_csv,
)
from .solver import IstaConfig, IstaResult, Problem, ista_solve, mu_max, nu_max, objective

__version__ = "0.1.0"

__all__ = [
    "w0",
    "w0_array",
    "wm1",
    "wm1_array",
    "KINDS",
    "PenaltySpec",
    "log_prox_breakpoint",
    "penalty_value",
    "penalty_value_vec",
    "prox_scalar",
    "prox_values",
    "scaled_prox_values",
    "weak_convexity_rho",
    "PieParams",
    "ProxSet",
    "ThresholdResult",
    "L_derivatives",
    "iota_constant",
    "objective_L",
    "pie_prox_values",
    "prox_pie",
    "prox_pie_select",
    "t_operator",
    "t_operator_baseline",
    "t_operator_refined",
    "threshold_bar_tau",
    "x1_candidate",
    "MatrixKind",
    "SignalSpec",
    "gen_matrix",
    "gen_signal",
    "is_success",
    "matrix_to_csv",
    "mutual_coherence",
    "relative_error",
    "trial_seeds",
    "vector_to_csv",
    "IstaConfig",
    "IstaResult",
    "Problem",
    "ista_solve",
    "mu_max",
    "nu_max",
    "objective",
    "__version__",
]
