"""Ordinary least squares with an intercept, solved by Householder QR."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_triangular

from .core import Dataset
from .errors import (
    ArityMismatch,
    RankDeficient,
    SensitiveForbidden,
    SensitiveRequired,
    Underdetermined,
)

#: Designs whose column-equilibrated condition number exceeds this are rejected.
MAX_CONDITION = 1e8


@dataclass(frozen=True, eq=False)
class LinearModel:
    """``y = intercept + coefficients . x (+ sensitive_coefficient * s)``."""

    intercept: float
    coefficients: np.ndarray
    sensitive_coefficient: float | None = None
    n_samples: int = 0
    condition_estimate: float = 1.0
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=float, copy=True).ravel()
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "intercept", float(self.intercept))
        if self.sensitive_coefficient is not None:
            object.__setattr__(self, "sensitive_coefficient", float(self.sensitive_coefficient))
        names = tuple(self.feature_names) or tuple(f"x{j + 1}" for j in range(coef.size))
        if len(names) != coef.size:
            raise ArityMismatch(f"{coef.size} coefficients but {len(names)} feature names")
        object.__setattr__(self, "feature_names", names)

    @property
    def k(self) -> int:
        return self.coefficients.size

    @property
    def includes_sensitive(self) -> bool:
        return self.sensitive_coefficient is not None

    @property
    def trained_on(self) -> dict:
        return {"n": self.n_samples, "k": self.k, "includes_sensitive": self.includes_sensitive}

    def to_dict(self) -> dict:
        return {
            "intercept": self.intercept,
            "coefficients": self.coefficients.tolist(),
            "sensitive_coefficient": self.sensitive_coefficient,
            "feature_names": list(self.feature_names),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "LinearModel":
        return cls(
            intercept=data["intercept"],
            coefficients=data["coefficients"],
            sensitive_coefficient=data.get("sensitive_coefficient"),
            feature_names=tuple(data.get("feature_names") or ()),
        )

    @classmethod
    def from_json(cls, text: str) -> "LinearModel":
        return cls.from_dict(json.loads(text))

    def with_intercept(self, intercept: float) -> "LinearModel":
        return replace(self, intercept=intercept, sensitive_coefficient=None)


def solve_least_squares(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimize ``||A z - b||`` and return ``(z, condition_estimate)``.

    Columns are scaled to unit norm before the QR factorization, so the
    condition estimate is insensitive to the units of each column.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, p = A.shape
    if m < p:
        raise Underdetermined(f"{m} rows for {p} parameters")
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise RankDeficient("design has an all-zero column")
    Q, R = np.linalg.qr(A / norms)
    sv = np.linalg.svd(R, compute_uv=False)
    cond = np.inf if sv[-1] == 0 else float(sv[0] / sv[-1])
    if not cond <= MAX_CONDITION:
        raise RankDeficient(f"condition estimate {cond:.3g} exceeds {MAX_CONDITION:g}")
    z = solve_triangular(R, Q.T @ b)
    return z / norms, cond


def design_matrix(d: Dataset, include_sensitive: bool) -> np.ndarray:
    cols = [np.ones(d.n), d.features]
    if include_sensitive:
        cols.append(d.sensitive[:, None])
    return np.column_stack(cols)


def fit(d: Dataset, include_sensitive: bool = False) -> LinearModel:
    """Fit OLS with an intercept, optionally including the sensitive attribute."""
    A = design_matrix(d, include_sensitive)
    z, cond = solve_least_squares(A, d.target)
    return LinearModel(
        intercept=z[0],
        coefficients=z[1 : d.k + 1],
        sensitive_coefficient=z[-1] if include_sensitive else None,
        n_samples=d.n,
        condition_estimate=cond,
        feature_names=d.feature_names,
    )


def _check_sensitive(m: LinearModel, sensitive) -> None:
    if m.includes_sensitive and sensitive is None:
        raise SensitiveRequired("model was fit with the sensitive attribute; supply it")
    if not m.includes_sensitive and sensitive is not None:
        raise SensitiveForbidden("model does not use the sensitive attribute")


def predict(m: LinearModel, features, sensitive=None):
    """Evaluate the model.

    A 1-D ``features`` vector gives a float; a 2-D (n, k) matrix gives an
    array of n predictions.
    """
    _check_sensitive(m, sensitive)
    X = np.asarray(features, dtype=float)
    single = X.ndim == 1
    X2 = X.reshape(1, -1) if single else X
    if X2.ndim != 2 or X2.shape[1] != m.k:
        raise ArityMismatch(f"model expects {m.k} features, got shape {X.shape}")
    out = m.intercept + X2 @ m.coefficients
    if m.includes_sensitive:
        s = np.broadcast_to(np.asarray(sensitive, dtype=float), out.shape)
        out = out + m.sensitive_coefficient * s
    return float(out[0]) if single else out


def predict_dataset(m: LinearModel, d: Dataset) -> np.ndarray:
    if m.k != d.k:
        raise ArityMismatch(f"model expects {m.k} features, dataset has {d.k}")
    return predict(m, d.features, d.sensitive if m.includes_sensitive else None)


def residuals(m: LinearModel, d: Dataset) -> np.ndarray:
    """``y - y_hat`` in row order."""
    return d.target - predict_dataset(m, d)
