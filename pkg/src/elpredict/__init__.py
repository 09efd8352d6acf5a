"""Weighted empirical-likelihood inference for the slope of a predictive regression."""
__version__ = "0.1.0"

from ._core import BACKEND
from .baseline import LseFit, bootstrap_lse_test, fit_full_model, lse_beta
from .chi2 import chi_square_isf, chi_square_quantile, chi_square_sf
from .dgp import DgpConfig, gen_innovation_pair, gen_sample, gen_student_t, make_rng
from .el import (
    ConfidenceSet,
    DegenerateSampleError,
    ElResult,
    InterceptMode,
    InvalidSampleError,
    RegressionSample,
    SolverError,
    TestDecision,
    WeightSpec,
    confidence_set,
    el_test,
    log_el_ratio,
    score_root,
    solve_lagrange,
    weighted_scores,
)
from .experiment import ExperimentReport, build_method, run_experiment

__all__ = [
    "BACKEND", "ConfidenceSet", "DegenerateSampleError", "DgpConfig", "ElResult",
    "ExperimentReport", "InterceptMode", "InvalidSampleError", "LseFit", "RegressionSample",
    "SolverError", "TestDecision", "WeightSpec", "bootstrap_lse_test", "build_method",
    "chi_square_isf", "chi_square_quantile", "chi_square_sf", "confidence_set", "el_test",
    "fit_full_model", "gen_innovation_pair", "gen_sample", "gen_student_t", "log_el_ratio",
    "lse_beta", "make_rng", "run_experiment", "score_root", "solve_lagrange", "weighted_scores",
]
