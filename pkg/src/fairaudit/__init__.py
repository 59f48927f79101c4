"""Omitted-variable-bias analysis, sanitization and fairness measures for linear regression."""

__version__ = "0.1.0"

from .bias import BiasReport, SanitizationPolicy, bias_report, ovb_delta, sanitize
from .core import Dataset, SummaryStats, load_csv, summarize, write_csv
from .estimators import GroupPenalizedRegression, SanitizedLinearRegression
from .measures import (
    FairnessReport,
    GroupAssignment,
    group_error_profile,
    mean_difference,
    rank_bias_auc,
)
from .ols import LinearModel, fit, predict, residuals
from .robust import TradeoffPoint, penalized_fit, tradeoff_sweep
from .scenarios import ScenarioSpec, generate, table1_fixture

__all__ = [
    "BiasReport",
    "Dataset",
    "FairnessReport",
    "GroupAssignment",
    "GroupPenalizedRegression",
    "LinearModel",
    "SanitizationPolicy",
    "SanitizedLinearRegression",
    "ScenarioSpec",
    "SummaryStats",
    "TradeoffPoint",
    "bias_report",
    "fit",
    "generate",
    "group_error_profile",
    "load_csv",
    "mean_difference",
    "ovb_delta",
    "penalized_fit",
    "predict",
    "rank_bias_auc",
    "residuals",
    "sanitize",
    "summarize",
    "table1_fixture",
    "tradeoff_sweep",
    "write_csv",
]
