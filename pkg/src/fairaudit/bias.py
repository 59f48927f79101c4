"""Omitted-variable bias and model sanitization.

Leaving the sensitive attribute ``s`` out of a linear fit shifts each
feature coefficient by ``delta_j = beta * gamma_j``, where ``beta`` is the
sensitive coefficient of the full fit and ``gamma`` the slopes of an
auxiliary regression of ``s`` on the features. With a single feature
``gamma = Cov(x, s) / Var(x)``.

Sanitization fits the full model and then replaces ``beta * s`` by a constant
``c`` that is the same for everyone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import ols
from .core import Dataset, SummaryStats, summarize
from .errors import NotFullModel, ZeroVariance
from .ols import LinearModel


class SanitizationPolicy(str, enum.Enum):
    """Which group's historical treatment is taken as correct.

    ``reference_correct``: c = 0 (the s = 0 group is treated correctly).
    ``protected_correct``: c = beta.
    ``population_mean``: c = mean(s) * beta, the default.
    """

    REFERENCE_CORRECT = "reference_correct"
    PROTECTED_CORRECT = "protected_correct"
    POPULATION_MEAN = "population_mean"

    def constant(self, beta: float, sensitive_mean: float) -> float:
        if self is SanitizationPolicy.REFERENCE_CORRECT:
            return 0.0
        if self is SanitizationPolicy.PROTECTED_CORRECT:
            return beta
        return sensitive_mean * beta


DEFAULT_POLICY = SanitizationPolicy.POPULATION_MEAN


@dataclass(frozen=True, eq=False)
class BiasReport:
    delta: np.ndarray
    predicted_omitted_intercept: float
    predicted_omitted_coefficients: np.ndarray
    empirical_omitted_intercept: float
    empirical_omitted_coefficients: np.ndarray
    beta: float
    agreement: float
    # "closed_form" for a single feature, "auxiliary_regression" otherwise
    method: str

    def to_dict(self) -> dict:
        return {
            "delta": self.delta.tolist(),
            "beta": self.beta,
            "predicted_omitted_intercept": self.predicted_omitted_intercept,
            "predicted_omitted_coefficients": self.predicted_omitted_coefficients.tolist(),
            "empirical_omitted_intercept": self.empirical_omitted_intercept,
            "empirical_omitted_coefficients": self.empirical_omitted_coefficients.tolist(),
            "agreement": self.agreement,
            "method": self.method,
        }


def ovb_delta(stats: SummaryStats, beta: float, feature_index: int) -> float:
    """``beta * Cov(x_j, s) / Var(x_j)``."""
    var = float(stats.feature_variances[feature_index])
    if var <= 0:
        raise ZeroVariance(feature_index)
    return beta * float(stats.cov_feature_sensitive[feature_index]) / var


def bias_report(
    d: Dataset,
    full_model: LinearModel | None = None,
    omitted_model: LinearModel | None = None,
) -> BiasReport:
    """Predict the omitted-variable fit from the full fit and compare it to the real one.

    Pre-fitted models may be passed to avoid refitting.
    """
    full = full_model if full_model is not None else ols.fit(d, include_sensitive=True)
    omitted = omitted_model if omitted_model is not None else ols.fit(d, include_sensitive=False)
    if not full.includes_sensitive:
        raise NotFullModel("full_model must include the sensitive coefficient")
    beta = full.sensitive_coefficient
    stats = summarize(d)

    if d.k == 1:
        delta = np.array([ovb_delta(stats, beta, 0)])
        method = "closed_form"
    else:
        aux, _ = ols.solve_least_squares(ols.design_matrix(d, False), d.sensitive)
        delta = beta * aux[1:]
        method = "auxiliary_regression"

    pred_coef = full.coefficients + delta
    pred_intercept = (
        full.intercept + beta * stats.sensitive_mean - float(delta @ stats.feature_means)
    )
    agreement = max(
        abs(pred_intercept - omitted.intercept),
        float(np.max(np.abs(pred_coef - omitted.coefficients))),
    )
    return BiasReport(
        delta=delta,
        predicted_omitted_intercept=pred_intercept,
        predicted_omitted_coefficients=pred_coef,
        empirical_omitted_intercept=omitted.intercept,
        empirical_omitted_coefficients=omitted.coefficients.copy(),
        beta=beta,
        agreement=agreement,
        method=method,
    )


def sanitize(
    full_model: LinearModel,
    policy: SanitizationPolicy | str = DEFAULT_POLICY,
    stats: SummaryStats | float | None = None,
) -> LinearModel:
    """Drop the sensitive term of ``full_model``, folding ``c`` into the intercept.

    ``stats`` supplies the sensitive mean (a :class:`SummaryStats` or a bare
    float); it is only consulted by the population-mean policy.
    """
    if not full_model.includes_sensitive:
        raise NotFullModel("sanitize needs a model fit with the sensitive attribute")
    policy = SanitizationPolicy(policy)
    if isinstance(stats, SummaryStats):
        s_mean = stats.sensitive_mean
    elif stats is None:
        if policy is SanitizationPolicy.POPULATION_MEAN:
            raise ValueError("population_mean policy needs the sensitive mean")
        s_mean = 0.0
    else:
        s_mean = float(stats)
    c = policy.constant(full_model.sensitive_coefficient, s_mean)
    return full_model.with_intercept(full_model.intercept + c)
