"""Seeded synthetic data with direct, omitted-variable and sampling bias.

The generating mechanism is ``y = b0 + b . x + beta * s + e`` with Gaussian
noise ``e``. Randomness comes from numpy's counter-based Philox bit generator,
whose stream for a given seed is platform independent.

Pathology switches:

``label_bias``
    the target includes ``beta * s`` (historically biased labels).
``omit_sensitive_at_export``
    the sensitive column is flagged hidden and is dropped from CSV exports.
``sample_skew``
    the groups have unequal sizes. Without it the sizes must match.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import Dataset
from .errors import InvalidSpec

PATHOLOGIES = frozenset({"label_bias", "omit_sensitive_at_export", "sample_skew"})
GROUPS = ("reference", "protected")
ROW_ORDERS = ("reference_first", "protected_first")


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class FeatureDistribution:
    """``uniform(low, high)``, ``normal(mean, std)`` or a ``fixed`` list of values."""

    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def uniform(cls, low, high):
        return cls("uniform", {"low": low, "high": high})

    @classmethod
    def normal(cls, mean, std):
        return cls("normal", {"mean": mean, "std": std})

    @classmethod
    def fixed(cls, values):
        return cls("fixed", {"values": list(values)})

    def validate(self, size: int, where: str) -> None:
        p = self.params
        if self.kind == "uniform":
            if not (_finite(p.get("low")) and _finite(p.get("high")) and p["low"] <= p["high"]):
                raise InvalidSpec(f"{where}: uniform needs finite low <= high")
        elif self.kind == "normal":
            if not (_finite(p.get("mean")) and _finite(p.get("std")) and p["std"] >= 0):
                raise InvalidSpec(f"{where}: normal needs finite mean and std >= 0")
        elif self.kind == "fixed":
            values = p.get("values")
            if not isinstance(values, list) or not all(_finite(v) for v in values):
                raise InvalidSpec(f"{where}: fixed needs a list of finite numbers")
            if len(values) != size:
                raise InvalidSpec(f"{where}: fixed has {len(values)} values for {size} rows")
        else:
            raise InvalidSpec(f"{where}: unknown distribution kind {self.kind!r}")

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = self.params
        if self.kind == "uniform":
            return rng.uniform(p["low"], p["high"], size)
        if self.kind == "normal":
            return p["mean"] + p["std"] * rng.standard_normal(size)
        return np.asarray(p["values"], dtype=float)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureDistribution":
        if not isinstance(data, dict) or "kind" not in data:
            raise InvalidSpec(f"bad feature distribution: {data!r}")
        params = {k: v for k, v in data.items() if k != "kind"}
        return cls(data["kind"], params)


@dataclass(frozen=True)
class ScenarioSpec:
    true_intercept: float
    true_coefficients: tuple[float, ...]
    true_beta: float
    noise_std: float
    n_reference: int
    n_protected: int
    # {"reference": [dist per feature], "protected": [dist per feature]}
    feature_distributions: dict
    pathologies: frozenset = frozenset({"label_bias"})
    seed: int = 0
    feature_names: tuple[str, ...] = ()
    sensitive_name: str = "s"
    target_name: str = "y"
    row_order: str = "reference_first"
    allow_single_group: bool = False

    def __post_init__(self):
        object.__setattr__(self, "true_coefficients", tuple(self.true_coefficients))
        object.__setattr__(self, "pathologies", frozenset(self.pathologies))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if not isinstance(self.feature_distributions, dict):
            raise InvalidSpec("feature_distributions must map group -> list of distributions")
        dists = {}
        for grp, items in self.feature_distributions.items():
            if not isinstance(items, (list, tuple)):
                raise InvalidSpec(f"{grp}: expected a list of distributions")
            dists[grp] = tuple(
                d if isinstance(d, FeatureDistribution) else FeatureDistribution.from_dict(d)
                for d in items
            )
        object.__setattr__(self, "feature_distributions", dists)

    @property
    def k(self) -> int:
        return len(self.true_coefficients)

    def names(self) -> tuple[str, ...]:
        return self.feature_names or tuple(f"x{j + 1}" for j in range(self.k))

    def validate(self) -> None:
        for name in ("true_intercept", "true_beta", "noise_std"):
            if not _finite(getattr(self, name)):
                raise InvalidSpec(f"{name} must be a finite number")
        if self.k < 1 or not all(_finite(b) for b in self.true_coefficients):
            raise InvalidSpec("true_coefficients must be a non-empty list of finite numbers")
        if self.noise_std < 0:
            raise InvalidSpec("noise_std must be >= 0")
        for name in ("n_reference", "n_protected", "seed"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InvalidSpec(f"{name} must be a non-negative integer")
        if self.n_reference + self.n_protected < 2:
            raise InvalidSpec("need at least 2 rows in total")
        if min(self.n_reference, self.n_protected) == 0 and not self.allow_single_group:
            raise InvalidSpec("both groups need members unless allow_single_group is set")
        unknown = self.pathologies - PATHOLOGIES
        if unknown:
            raise InvalidSpec(f"unknown pathologies: {sorted(unknown)}")
        skewed = self.n_reference != self.n_protected
        if skewed and "sample_skew" not in self.pathologies:
            raise InvalidSpec("unequal group sizes require the sample_skew pathology")
        if not skewed and "sample_skew" in self.pathologies:
            raise InvalidSpec("sample_skew requires unequal group sizes")
        if self.row_order not in ROW_ORDERS:
            raise InvalidSpec(f"row_order must be one of {ROW_ORDERS}")
        names = self.names()
        if len(names) != self.k:
            raise InvalidSpec(f"{len(names)} feature names for {self.k} coefficients")
        all_names = names + (self.sensitive_name, self.target_name)
        if len(set(all_names)) != len(all_names):
            raise InvalidSpec("column names must be distinct")
        if set(self.feature_distributions) != set(GROUPS):
            raise InvalidSpec(f"feature_distributions needs exactly the keys {GROUPS}")
        for grp, size in zip(GROUPS, (self.n_reference, self.n_protected)):
            dists = self.feature_distributions[grp]
            if len(dists) != self.k:
                raise InvalidSpec(f"{grp}: {len(dists)} distributions for {self.k} features")
            for j, dist in enumerate(dists):
                dist.validate(size, f"{grp} feature {j}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["true_coefficients"] = list(self.true_coefficients)
        out["pathologies"] = sorted(self.pathologies)
        out["feature_names"] = list(self.feature_names)
        out["feature_distributions"] = {
            grp: [d.to_dict() for d in items] for grp, items in self.feature_distributions.items()
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioSpec":
        if not isinstance(data, dict):
            raise InvalidSpec("spec must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InvalidSpec(f"unknown spec fields: {sorted(unknown)}")
        try:
            spec = cls(**data)
        except TypeError as exc:
            raise InvalidSpec(str(exc)) from None
        return spec

    @classmethod
    def from_json(cls, text: str) -> "ScenarioSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"spec is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "ScenarioSpec":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def generate(spec: ScenarioSpec) -> Dataset:
    """Draw a dataset; identical specs (seed included) give identical datasets.

    Draw order: reference-group features column by column, then protected-group
    features, then the noise vector in output row order.
    """
    spec.validate()
    rng = np.random.Generator(np.random.Philox(spec.seed))
    blocks = {}
    for grp, size in zip(GROUPS, (spec.n_reference, spec.n_protected)):
        cols = [dist.draw(rng, size) for dist in spec.feature_distributions[grp]]
        blocks[grp] = np.column_stack(cols) if size else np.empty((0, spec.k))

    order = GROUPS if spec.row_order == "reference_first" else GROUPS[::-1]
    X = np.vstack([blocks[g] for g in order])
    s = np.concatenate([np.full(blocks[g].shape[0], float(g == "protected")) for g in order])

    y = spec.true_intercept + X @ np.asarray(spec.true_coefficients, dtype=float)
    if "label_bias" in spec.pathologies:
        y = y + spec.true_beta * s
    if spec.noise_std > 0:
        y = y + spec.noise_std * rng.standard_normal(y.size)

    return Dataset(
        features=X,
        sensitive=s,
        target=y,
        feature_names=spec.names(),
        sensitive_name=spec.sensitive_name,
        target_name=spec.target_name,
        sensitive_hidden="omit_sensitive_at_export" in spec.pathologies,
    )


TABLE1_ROWS = (
    # education, ethnicity, salary; left block of the table first
    (1, 1, 600),
    (2, 1, 700),
    (3, 1, 800),
    (4, 1, 900),
    (10, 1, 1500),
    (1, 0, 1100),
    (6, 0, 1600),
    (7, 0, 1700),
    (9, 0, 1900),
    (10, 0, 2000),
)


def table1_fixture() -> Dataset:
    """The ten-row salary toy data (ethnicity 0 = natives, 1 = immigrants)."""
    rows = np.array(TABLE1_ROWS, dtype=float)
    return Dataset(
        features=rows[:, :1],
        sensitive=rows[:, 1],
        target=rows[:, 2],
        feature_names=("education",),
        sensitive_name="ethnicity",
        target_name="salary",
    )


def table1_spec() -> ScenarioSpec:
    """Noise-free spec that regenerates :func:`table1_fixture` row for row."""
    edu_protected = [r[0] for r in TABLE1_ROWS if r[1] == 1]
    edu_reference = [r[0] for r in TABLE1_ROWS if r[1] == 0]
    return ScenarioSpec(
        true_intercept=1000,
        true_coefficients=(100,),
        true_beta=-500,
        noise_std=0,
        n_reference=len(edu_reference),
        n_protected=len(edu_protected),
        feature_distributions={
            "reference": [FeatureDistribution.fixed(edu_reference)],
            "protected": [FeatureDistribution.fixed(edu_protected)],
        },
        pathologies=frozenset({"label_bias"}),
        seed=0,
        feature_names=("education",),
        sensitive_name="ethnicity",
        target_name="salary",
        row_order="protected_first",
    )
