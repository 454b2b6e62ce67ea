"""Command-line front end.

Exit status is 0 on success, 1 when the economy or the requested
computation violates a modelling assumption, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .economy import EconomySpec, load_economy, random_economy, validate
from .errors import LaborValueError
from .feasible import build_value_domain, slice_2d, slice_csv
from .operators import build_operators, parametric_reproduction
from .profit import max_feasible_rate, profit_bounds, sweep, sweep_csv
from .spectral import dominant_eigenvalue, perron_left
from .transform import critical_shares, hyperplane_normal, profit_share, solve_absolute, solve_relative

COMMANDS = ("validate", "analyze", "interval", "transform", "slice", "sweep", "gen")
CSV_COMMANDS = {"interval", "slice", "sweep"}


class UsageError(Exception):
    pass


def _round(value: Any) -> Any:
    """Round every float to 10 significant digits so reports are byte-stable."""
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.10g}")
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v) for v in value]
    if isinstance(value, np.ndarray):
        return _round(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _json(doc: dict[str, Any]) -> str:
    return json.dumps(_round(doc), indent=2) + "\n"


def _load(path: str | None) -> EconomySpec:
    if path is None:
        raise UsageError("an input economy file is required")
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load_economy(data)


def _parse_w_rel(raw: str | None, e: EconomySpec, r: float) -> np.ndarray:
    if raw is None:
        print("note: --w-rel not given, using uniform relative wages", file=sys.stderr)
        return np.ones(e.n)
    if raw == "perron":
        return perron_left(parametric_reproduction(e, r))
    path = Path(raw)
    try:
        values = json.loads(path.read_text()) if path.is_file() else [float(v) for v in raw.split(",")]
    except (ValueError, json.JSONDecodeError):
        raise UsageError(f"--w-rel must be a comma-separated list, a JSON file or 'perron', got {raw!r}") from None
    w = np.asarray(values, dtype=float)
    if w.shape != (e.n,):
        raise UsageError(f"--w-rel needs {e.n} entries, got {w.size}")
    return w


def _validate(args: argparse.Namespace) -> tuple[str, int]:
    report = validate(_load(args.input))
    return _json(report.to_dict()), 0 if report.ok else 1


def _analyze(args: argparse.Namespace) -> tuple[str, int]:
    e = _load(args.input)
    ops = build_operators(e)
    domain = build_value_domain(ops)
    bounds = profit_bounds(e)
    doc = {
        "eigenvalues": {
            "rho_A_tilde": dominant_eigenvalue(ops.a_tilde),
            "rho_M0": domain.lambda_star,
            "rho_A_hat": ops.rho_a_hat,
        },
        "r_A": bounds.r_technical,
        "r_star": bounds.r_feasible,
        "gap": bounds.gap,
        "y_star": domain.y_star,
        "e_star": domain.e_star,
        "domain_bounds": {"lower": domain.lower_bounds, "upper": domain.upper_bounds},
        "degenerate": domain.degenerate,
    }
    return _json(doc), 0


def _interval(args: argparse.Namespace) -> tuple[str, int]:
    e = _load(args.input)
    interval = critical_shares(build_operators(e), e.x)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["sector", "gamma_crit"])
        for name, g in zip(e.names, interval.per_sector):
            writer.writerow([name, f"{g:.10g}"])
        writer.writerow(["min", f"{interval.gamma_min:.10g}"])
        writer.writerow(["max", f"{interval.gamma_max:.10g}"])
        return buf.getvalue(), 0
    return _json(interval.to_dict()), 0


def _transform(args: argparse.Namespace) -> tuple[str, int]:
    absolute = args.P_star is not None or args.Pi_star is not None
    relative = args.r is not None or args.w_rel is not None
    if absolute and relative:
        raise UsageError("transform takes either --r/--w-rel or --P-star/--Pi-star, not both")
    if absolute:
        if args.P_star is None or args.Pi_star is None:
            raise UsageError("absolute mode needs both --P-star and --Pi-star")
        e = _load(args.input)
        solution = solve_absolute(e, args.P_star, args.Pi_star)
    else:
        if args.r is None:
            raise UsageError("relative mode needs --r")
        e = _load(args.input)
        solution = solve_relative(e, _parse_w_rel(args.w_rel, e, args.r), args.r)
    return _json(solution.to_dict()), 0


def _slice(args: argparse.Namespace) -> tuple[str, int]:
    e = _load(args.input)
    ops = build_operators(e)
    vertices = slice_2d(build_value_domain(ops))
    eta = gamma = None
    if args.r is not None:
        gamma = profit_share(e, _parse_w_rel(args.w_rel, e, args.r), args.r)
        eta = hyperplane_normal(ops, e.x, gamma)
    if args.format == "json":
        doc: dict[str, Any] = {"vertices": vertices}
        if eta is not None:
            doc["line"] = {"gamma": gamma, "eta": eta}
        return _json(doc), 0
    text = slice_csv(vertices)
    if eta is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["gamma", "eta1", "eta2", "eta3"])
        writer.writerow([f"{v:.10g}" for v in (gamma, *eta)])
        text += "\n" + buf.getvalue()
    return text, 0


def _sweep(args: argparse.Namespace) -> tuple[str, int]:
    e = _load(args.input)
    rows = sweep(e, args.points, r_star=max_feasible_rate(e))
    if args.format == "json":
        return _json({"rows": [{"r": r, "rho_Mr": rho, "domain_degenerate": d} for r, rho, d in rows]}), 0
    return sweep_csv(rows), 0


def _gen(args: argparse.Namespace) -> tuple[str, int]:
    # Full precision: a generated economy must re-load bit-for-bit.
    return random_economy(args.n, args.seed).to_json() + "\n", 0


HANDLERS = {
    "validate": _validate,
    "analyze": _analyze,
    "interval": _interval,
    "transform": _transform,
    "slice": _slice,
    "sweep": _sweep,
    "gen": _gen,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laborvalue",
        description="Reproduction-feasible reduction coefficients, profit bounds and transformation solver.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help="economy JSON file (not used by gen)")
    parser.add_argument("-o", "--output", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), help="report format")
    parser.add_argument("--r", type=float, help="uniform profit rate")
    parser.add_argument("--w-rel", dest="w_rel", help="relative wages: comma list, JSON file or 'perron'")
    parser.add_argument("--P-star", dest="P_star", type=float, help="observed total price (absolute mode)")
    parser.add_argument("--Pi-star", dest="Pi_star", type=float, help="observed total profit (absolute mode)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n", type=int, default=3, help="sector count for gen")
    parser.add_argument("--points", type=int, default=21, help="grid size for sweep")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "csv" if args.command in ("slice", "sweep") else "json"
    try:
        if args.format == "csv" and args.command not in CSV_COMMANDS:
            raise UsageError(f"{args.command} has no CSV form")
        text, status = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except LaborValueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
