"""Dataset container, CSV ingestion and moment summaries."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateRole,
    EmptyDataset,
    InvalidDataset,
    MissingColumn,
    NonNumericCell,
)

ALL_REMAINING = "all"


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observations with one sensitive attribute.

    ``features`` has shape (n, k); ``sensitive`` and ``target`` have length n.
    A binary sensitive attribute is coded 0 = reference group, 1 = protected
    group. ``sensitive_hidden`` marks a column that is known to the generator
    but must not be exported.
    """

    features: np.ndarray
    sensitive: np.ndarray
    target: np.ndarray
    feature_names: tuple[str, ...]
    sensitive_name: str = "s"
    target_name: str = "y"
    sensitive_hidden: bool = False

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise InvalidDataset(f"features must be 2-D, got shape {X.shape}")
        s = np.asarray(self.sensitive, dtype=float).ravel()
        y = np.asarray(self.target, dtype=float).ravel()
        n, k = X.shape
        if n < 1:
            raise EmptyDataset("dataset has no rows")
        if k < 1:
            raise InvalidDataset("dataset needs at least one feature")
        if s.shape[0] != n or y.shape[0] != n:
            raise InvalidDataset(
                f"length mismatch: features {n}, sensitive {s.shape[0]}, target {y.shape[0]}"
            )
        for name, arr in (("features", X), ("sensitive", s), ("target", y)):
            if not np.all(np.isfinite(arr)):
                raise InvalidDataset(f"{name} contains non-finite values")
        names = tuple(str(c) for c in self.feature_names)
        if len(names) != k:
            raise InvalidDataset(f"expected {k} feature names, got {len(names)}")
        all_names = names + (str(self.sensitive_name), str(self.target_name))
        if len(set(all_names)) != len(all_names):
            raise DuplicateRole(f"column names must be distinct: {all_names}")

        object.__setattr__(self, "features", _frozen(X))
        object.__setattr__(self, "sensitive", _frozen(s))
        object.__setattr__(self, "target", _frozen(y))
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def k(self) -> int:
        return self.features.shape[1]

    def is_binary_sensitive(self) -> bool:
        return bool(np.all((self.sensitive == 0) | (self.sensitive == 1)))

    def take(self, rows) -> "Dataset":
        """Return a new dataset restricted to (or reordered by) ``rows``."""
        rows = np.asarray(rows)
        return Dataset(
            self.features[rows],
            self.sensitive[rows],
            self.target[rows],
            self.feature_names,
            self.sensitive_name,
            self.target_name,
            self.sensitive_hidden,
        )


@dataclass(frozen=True, eq=False)
class SummaryStats:
    """Population (divide-by-n) moments of a dataset."""

    feature_means: np.ndarray
    sensitive_mean: float
    feature_variances: np.ndarray
    sensitive_variance: float
    cov_feature_sensitive: np.ndarray
    n: int
    feature_names: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "feature_names": list(self.feature_names),
            "feature_means": self.feature_means.tolist(),
            "feature_variances": self.feature_variances.tolist(),
            "sensitive_mean": self.sensitive_mean,
            "sensitive_variance": self.sensitive_variance,
            "cov_feature_sensitive": self.cov_feature_sensitive.tolist(),
        }


def _mean(v: np.ndarray) -> float:
    # fsum is exactly rounded, so the result does not depend on row order
    return math.fsum(v) / v.shape[0]


def summarize(d: Dataset) -> SummaryStats:
    n = d.n
    s = d.sensitive
    s_mean = _mean(s)
    s_c = s - s_mean
    means, variances, covs = [], [], []
    for j in range(d.k):
        x = d.features[:, j]
        m = _mean(x)
        x_c = x - m
        means.append(m)
        variances.append(_mean(x_c * x_c))
        covs.append(_mean(x_c * s_c))
    return SummaryStats(
        feature_means=_frozen(means),
        sensitive_mean=s_mean,
        feature_variances=_frozen(variances),
        sensitive_variance=_mean(s_c * s_c),
        cov_feature_sensitive=_frozen(covs),
        n=n,
        feature_names=d.feature_names,
    )


def _parse_cell(text: str, row: int, column: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise NonNumericCell(row, column, text) from None
    if not math.isfinite(value):
        raise NonNumericCell(row, column, text)
    return value


def load_csv(
    path,
    target: str,
    sensitive: str,
    features: Sequence[str] | str = ALL_REMAINING,
) -> Dataset:
    """Read a comma-separated file with a header row into a :class:`Dataset`.

    ``features`` is either a list of column names or ``"all"`` for every
    column not used as target or sensitive. Row numbers in
    :class:`NonNumericCell` are 1-based data rows (the header is not counted).
    """
    if target == sensitive:
        raise DuplicateRole(f"column {target!r} used as both target and sensitive")
    explicit = not (isinstance(features, str) and features == ALL_REMAINING)
    if explicit:
        features = list(features)
        if len(set(features)) != len(features):
            raise DuplicateRole(f"duplicate feature names: {features}")
        clash = {target, sensitive} & set(features)
        if clash:
            raise DuplicateRole(f"columns {sorted(clash)} used in more than one role")

    with open(Path(path), newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty") from None
        rows = [r for r in reader if r]

    for name in [target, sensitive] + (features if explicit else []):
        if name not in header:
            raise MissingColumn(name)
    if not explicit:
        features = [h for h in header if h not in (target, sensitive)]
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")

    index = {h: i for i, h in enumerate(header)}
    wanted = features + [sensitive, target]
    values = np.empty((len(rows), len(wanted)))
    for r, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise NonNumericCell(r, "<row>", ",".join(row))
        for c, name in enumerate(wanted):
            values[r - 1, c] = _parse_cell(row[index[name]], r, name)

    k = len(features)
    return Dataset(
        features=values[:, :k],
        sensitive=values[:, k],
        target=values[:, k + 1],
        feature_names=tuple(features),
        sensitive_name=sensitive,
        target_name=target,
    )


def _fmt(v: float) -> str:
    return repr(float(v))


def write_csv(d: Dataset, path) -> None:
    """Write ``d`` as CSV (features, sensitive, target); hidden sensitive columns are dropped."""
    Path(path).write_text(to_csv_text(d), encoding="utf-8")


def to_csv_text(d: Dataset) -> str:
    cols = list(d.feature_names)
    blocks = [d.features]
    if not d.sensitive_hidden:
        cols.append(d.sensitive_name)
        blocks.append(d.sensitive[:, None])
    cols.append(d.target_name)
    blocks.append(d.target[:, None])
    table = np.hstack(blocks)
    lines = [",".join(cols)]
    lines.extend(",".join(_fmt(v) for v in row) for row in table)
    return "\n".join(lines) + "\n"
