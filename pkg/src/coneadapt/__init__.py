"""Guaranteed adaptive integration and L-infinity recovery for cones of functions."""
from .cone import (
    ConeSpec,
    ErrorModel,
    InfiniteInflationError,
    ProblemFamily,
    RunResult,
    SampledFunction,
    UnrepresentableIndexError,
    cost_bounds,
    h_inverse,
    inflation_factors,
    run_multi_stage,
    run_non_adaptive,
    run_two_stage,
    tau_min_estimate,
)
from .experiment import ExperimentConfig, ExperimentReport, bounds_report, fool_demo, run_experiment
from .funlab import (
    BumpSpec,
    cone_probability,
    make_bump,
    make_fooling_pair,
    nonconvexity_witness,
    oscillatory_fluky,
    reference_integral,
    sample_bump,
)
from .heuristic import HeuristicResult, heuristic_trapezoid
from .linf import SplineApproximant, approximate_adaptive, sup_error_on_grid
from .trapezoid import integrate_adaptive, trapezoid

__version__ = "0.1.0"
