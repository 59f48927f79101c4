"""scikit-learn compatible wrappers.

The sensitive attribute is passed to ``fit`` as ``sensitive_features`` and
is never needed at prediction time, so both estimators drop into pipelines
and model-selection tools that only call ``predict(X)``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from . import bias, ols, robust
from .core import Dataset, summarize


def _dataset(X, y, sensitive_features) -> Dataset:
    X, y = check_X_y(X, y, y_numeric=True)
    if sensitive_features is None:
        raise ValueError("sensitive_features is required")
    s = check_array(sensitive_features, ensure_2d=False).ravel()
    if s.shape[0] != X.shape[0]:
        raise ValueError(f"sensitive_features has {s.shape[0]} rows, X has {X.shape[0]}")
    return Dataset(X, s, y, tuple(f"x{j}" for j in range(X.shape[1])))


class _LinearPredictMixin:
    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return ols.predict(self.model_, X)


class SanitizedLinearRegression(_LinearPredictMixin, RegressorMixin, BaseEstimator):
    """Linear regression fit with the sensitive attribute, which is then removed.

    Parameters
    ----------
    policy : {"population_mean", "reference_correct", "protected_correct"}
        Constant that replaces ``beta * s``: ``mean(s) * beta``, ``0`` or ``beta``.

    Attributes
    ----------
    full_model_ : LinearModel
        Fit including the sensitive attribute.
    model_ : LinearModel
        Sanitized, feature-only model used by ``predict``.
    coef_, intercept_, sensitive_coef_ : fitted values of the sanitized model
        and the sensitive coefficient that was removed.
    """

    def __init__(self, policy="population_mean"):
        self.policy = policy

    def fit(self, X, y, sensitive_features=None):
        d = _dataset(X, y, sensitive_features)
        policy = bias.SanitizationPolicy(self.policy)
        self.full_model_ = ols.fit(d, include_sensitive=True)
        self.sensitive_mean_ = summarize(d).sensitive_mean
        self.model_ = bias.sanitize(self.full_model_, policy, self.sensitive_mean_)
        self.coef_ = self.model_.coefficients.copy()
        self.intercept_ = self.model_.intercept
        self.sensitive_coef_ = self.full_model_.sensitive_coefficient
        self.n_features_in_ = d.k
        return self


class GroupPenalizedRegression(_LinearPredictMixin, RegressorMixin, BaseEstimator):
    """Least squares with a penalty on the gap between group mean residuals.

    ``sensitive_features`` must be binary (0 = reference, 1 = protected);
    it defines the groups but is not a predictor.
    """

    def __init__(self, fairness_penalty=0.0):
        self.fairness_penalty = fairness_penalty

    def fit(self, X, y, sensitive_features=None):
        d = _dataset(X, y, sensitive_features)
        self.model_ = robust.penalized_fit(d, d.sensitive, float(self.fairness_penalty))
        self.coef_ = self.model_.coefficients.copy()
        self.intercept_ = self.model_.intercept
        self.mse_, self.group_gap_ = robust.evaluate(self.model_, d, d.sensitive)
        self.n_features_in_ = d.k
        return self


def group_gap_score(estimator, X, y, sensitive_features) -> float:
    """Signed gap between reference and protected mean residuals of ``estimator``."""
    r = np.asarray(y, dtype=float) - estimator.predict(X)
    s = np.asarray(sensitive_features).ravel()
    return float(r[s == 0].mean() - r[s == 1].mean())
