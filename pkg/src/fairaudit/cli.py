"""``fairaudit`` command-line tool.

Exit codes: 0 success, 1 runtime/domain error, 2 usage error. Every failure
prints a single-line JSON object ``{"error": ..., "message": ...}`` on stderr
and leaves no output file behind.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__, robust
from .bias import SanitizationPolicy
from .core import ALL_REMAINING, load_csv, to_csv_text
from .errors import DuplicateRole, FairAuditError, MissingColumn
from .report import build_audit, canonical_dumps
from .scenarios import ScenarioSpec, generate

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2

# role errors are the user's fault as much as a bad flag is
_USAGE_ERRORS = (MissingColumn, DuplicateRole)


class UsageError(Exception):
    def __init__(self, message, code="UsageError"):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": message}, sort_keys=True) + "\n")


def _write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _features_arg(value: str):
    if value == ALL_REMAINING:
        return ALL_REMAINING
    names = [v.strip() for v in value.split(",") if v.strip()]
    if not names:
        raise UsageError("--features needs a comma list or 'all'")
    return names


def _lambdas_arg(value: str) -> list[float]:
    parts = [v.strip() for v in value.split(",") if v.strip()]
    if not parts:
        raise UsageError("--lambdas must not be empty")
    try:
        lambdas = [float(v) for v in parts]
    except ValueError:
        raise UsageError(f"--lambdas must be numbers, got {value!r}") from None
    if any(not (v >= 0) or v == float("inf") for v in lambdas):
        raise UsageError("lambdas must be finite and >= 0")
    if any(b < a for a, b in zip(lambdas, lambdas[1:])):
        raise UsageError("lambdas must ascend")
    return lambdas


def _load(args):
    return load_csv(args.csv, target=args.target, sensitive=args.sensitive,
                    features=_features_arg(args.features))


def cmd_audit(args) -> int:
    d = _load(args)
    report = build_audit(d, policy=args.policy, seed=args.seed)
    _write_atomic(args.out, canonical_dumps(report))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = ScenarioSpec.load(args.spec)
    if args.seed is not None:
        spec = ScenarioSpec.from_dict({**spec.to_dict(), "seed": args.seed})
    _write_atomic(args.out, to_csv_text(generate(spec)))
    return EXIT_OK


def _sweep_csv(points, feature_names) -> str:
    buf = io.StringIO()
    buf.write(",".join(["lambda", "mse", "group_gap", "intercept", *feature_names]) + "\n")
    for p in points:
        row = [p.lam, p.mse, p.group_gap, p.model.intercept, *p.model.coefficients]
        buf.write(",".join(format(float(v), ".17g") for v in row) + "\n")
    return buf.getvalue()


def cmd_sweep(args) -> int:
    lambdas = _lambdas_arg(args.lambdas)
    d = _load(args)
    points = robust.tradeoff_sweep(d, d.sensitive, lambdas)
    if str(args.out).lower().endswith(".csv"):
        text = _sweep_csv(points, d.feature_names)
    else:
        text = canonical_dumps([p.to_dict() for p in points])
    _write_atomic(args.out, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairaudit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fairaudit {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def roles(p):
        p.add_argument("csv", help="input CSV with a header row")
        p.add_argument("--target", required=True)
        p.add_argument("--sensitive", required=True)
        p.add_argument("--features", default=ALL_REMAINING,
                       help="comma-separated feature columns, or 'all' (default)")
        p.add_argument("--out", required=True)
        p.add_argument("--seed", type=int, default=None)

    audit = sub.add_parser("audit", help="fit, analyze bias, sanitize and measure fairness")
    roles(audit)
    audit.add_argument("--policy", default=SanitizationPolicy.POPULATION_MEAN.value,
                       choices=[p.value for p in SanitizationPolicy])
    audit.set_defaults(func=cmd_audit)

    simulate = sub.add_parser("simulate", help="generate a synthetic CSV from a scenario spec")
    simulate.add_argument("--spec", required=True)
    simulate.add_argument("--out", required=True)
    simulate.add_argument("--seed", type=int, default=None, help="override the spec's seed")
    simulate.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", help="accuracy/fairness tradeoff over penalty weights")
    roles(sweep)
    sweep.add_argument("--lambdas", required=True, help="ascending comma list, e.g. 0,1,100")
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: audit, simulate or sweep")
        return args.func(args)
    except UsageError as exc:
        _emit_error(exc.code, str(exc))
        return EXIT_USAGE
    except _USAGE_ERRORS as exc:
        _emit_error(exc.code, str(exc))
        return EXIT_USAGE
    except FairAuditError as exc:
        _emit_error(exc.code, str(exc))
        return EXIT_ERROR
    except OSError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_ERROR
    except ValueError as exc:
        _emit_error("ValueError", str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
