"""Audit report assembly and canonical JSON output."""

from __future__ import annotations

import json
import math

import numpy as np

from . import __version__, bias, ols
from .bias import SanitizationPolicy
from .core import Dataset, summarize
from .measures import fairness_report

# excluded from the canonical form so that reports compare across versions
VOLATILE_KEYS = ("tool_version",)


def _fairness(m, d: Dataset):
    pred = ols.predict_dataset(m, d)
    return fairness_report(pred, d.target - pred, d.sensitive).to_dict()


def build_audit(
    d: Dataset,
    policy: SanitizationPolicy | str = bias.DEFAULT_POLICY,
    seed: int | None = None,
) -> dict:
    """Fit full and omitted models, analyze the bias and sanitize under every policy.

    Fairness measures need a binary sensitive attribute; for numeric ones the
    ``fairness`` entry is ``None``.
    """
    policy = SanitizationPolicy(policy)
    stats = summarize(d)
    full = ols.fit(d, include_sensitive=True)
    omitted = ols.fit(d, include_sensitive=False)
    report = bias.bias_report(d, full, omitted)
    sanitized = {p.value: bias.sanitize(full, p, stats) for p in SanitizationPolicy}

    fairness = None
    if d.is_binary_sensitive() and 0 < stats.sensitive_mean < 1:
        fairness = {
            "full": _fairness(full, d),
            "omitted": _fairness(omitted, d),
            "sanitized": {name: _fairness(m, d) for name, m in sanitized.items()},
        }

    return {
        "dataset_summary": {
            **stats.to_dict(),
            "sensitive_name": d.sensitive_name,
            "target_name": d.target_name,
        },
        "full_model": full.to_dict(),
        "omitted_model": omitted.to_dict(),
        "bias": report.to_dict(),
        "policy": policy.value,
        "sanitized_model": sanitized[policy.value].to_dict(),
        "sanitized_models": {name: m.to_dict() for name, m in sanitized.items()},
        "fairness": fairness,
        "seed": seed,
        "tool_version": __version__,
    }


def canonical_form(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in VOLATILE_KEYS}


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def canonical_dumps(obj) -> str:
    """Sorted keys, no whitespace, floats at 17 significant digits, trailing newline."""
    return _encode(obj) + "\n"
