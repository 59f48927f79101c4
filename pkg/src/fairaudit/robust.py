"""Group-penalized least squares and the accuracy/fairness tradeoff sweep.

The fit minimizes

    (1/n) * sum(r_i ** 2) + lam * (mean(r | group 0) - mean(r | group 1)) ** 2

over an intercept and feature coefficients; the sensitive attribute is not a
predictor. The penalty is ``lam * (a . r) ** 2`` with ``a = 1{g=0}/n0 -
1{g=1}/n1``, so the objective is an ordinary least-squares problem on the
design augmented by one extra row ``sqrt(lam) * a^T [1, X]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ols
from .core import Dataset
from .errors import ArityMismatch
from .measures import GroupAssignment, as_groups
from .ols import LinearModel


@dataclass(frozen=True, eq=False)
class TradeoffPoint:
    lam: float
    mse: float
    group_gap: float
    model: LinearModel

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "mse": self.mse,
            "group_gap": self.group_gap,
            "model": self.model.to_dict(),
        }


def _contrast(g: GroupAssignment) -> np.ndarray:
    n0 = g.reference.sum()
    n1 = g.protected.sum()
    return np.where(g.reference, 1.0 / n0, -1.0 / n1)


def _resolve_groups(d: Dataset, groups) -> GroupAssignment:
    g = as_groups(d.sensitive if groups is None else groups)
    if g.n != d.n:
        raise ArityMismatch(f"{g.n} group labels for {d.n} rows")
    g.require_both()
    return g


def objective(d: Dataset, groups, lam: float, intercept: float, coefficients) -> float:
    """Penalized objective evaluated at arbitrary coefficients."""
    g = _resolve_groups(d, groups)
    r = d.target - intercept - d.features @ np.asarray(coefficients, dtype=float)
    gap = float(_contrast(g) @ r)
    return float(np.mean(r * r)) + lam * gap * gap


def penalized_fit(d: Dataset, groups=None, lam: float = 0.0) -> LinearModel:
    """Closed-form minimizer of the group-penalized objective.

    ``groups`` defaults to the dataset's (binary) sensitive column.
    """
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    g = _resolve_groups(d, groups)
    A = ols.design_matrix(d, include_sensitive=False)
    # conditioning is judged on the plain design; the penalty row only adds curvature
    _, cond = ols.solve_least_squares(A, d.target)
    scale = 1.0 / np.sqrt(d.n)
    if lam == 0:
        z, _ = ols.solve_least_squares(A, d.target)
    else:
        a = _contrast(g)
        w = np.sqrt(lam)
        A_aug = np.vstack([A * scale, w * (a @ A)])
        b_aug = np.append(d.target * scale, w * (a @ d.target))
        z = _solve_unchecked(A_aug, b_aug)
    return LinearModel(
        intercept=z[0],
        coefficients=z[1:],
        n_samples=d.n,
        condition_estimate=cond,
        feature_names=d.feature_names,
    )


def _solve_unchecked(A, b):
    norms = np.linalg.norm(A, axis=0)
    Q, R = np.linalg.qr(A / norms)
    return np.linalg.solve(R, Q.T @ b) / norms


def evaluate(m: LinearModel, d: Dataset, groups=None) -> tuple[float, float]:
    """Training ``(mse, group_gap)`` of a feature-only model."""
    g = _resolve_groups(d, groups)
    r = ols.residuals(m, d)
    return float(np.mean(r * r)), float(r[g.reference].mean() - r[g.protected].mean())


def tradeoff_sweep(d: Dataset, groups=None, lambdas=(0.0,)) -> list[TradeoffPoint]:
    """One :class:`TradeoffPoint` per lambda, in the given ascending order."""
    lambdas = [float(v) for v in lambdas]
    if not lambdas:
        raise ValueError("need at least one lambda")
    if any(v < 0 for v in lambdas):
        raise ValueError("lambdas must be >= 0")
    if any(b < a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("lambdas must ascend")
    g = _resolve_groups(d, groups)
    points = []
    for lam in lambdas:
        m = penalized_fit(d, g, lam)
        mse, gap = evaluate(m, d, g)
        points.append(TradeoffPoint(lam, mse, gap, m))
    return points
