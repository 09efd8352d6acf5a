"""Command-line front end: ``elpredict {test,ci,simulate}``."""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import fit_full_model, lse_beta
from .dgp import DgpConfig
from .el import (
    DegenerateSampleError,
    InterceptMode,
    InvalidSampleError,
    RegressionSample,
    SolverError,
    WeightSpec,
    confidence_set,
    el_test,
)
from .experiment import METHOD_NAMES, TSV_COLUMNS, ExperimentReport, run_experiment


class InputError(ValueError):
    """Malformed input file; message carries the offending line/row number."""


# --------------------------------------------------------------------------- series files

_MONTH = re.compile(r"^(\d{4})[-:/](\d{1,2})$")


def _parse_stamp(raw: str):
    """Integer, ISO date/datetime, or a ``YYYY-MM`` / ``YYYY:MM`` month."""
    raw = raw.strip()
    try:
        return int(raw)
    except ValueError:
        pass
    m = _MONTH.match(raw)
    if m:
        return dt.date(int(m.group(1)), int(m.group(2)), 1)
    try:
        return dt.date.fromisoformat(raw)
    except ValueError:
        return dt.datetime.fromisoformat(raw)


def read_series(path, y_col: str = "y", x_col: str = "x", start=None, end=None) -> RegressionSample:
    """Read a ``date,y,x`` CSV; row t's y is paired with row t-1's x.

    The first row contributes only X_0. Columns are found by header name and
    may appear in any order; extra columns are ignored. ``start``/``end``
    keep rows whose timestamp lies in the closed range (strings are parsed
    like the date column).
    """
    y_col, x_col = y_col.strip().lower(), x_col.strip().lower()
    try:
        lo = _parse_stamp(start) if isinstance(start, str) else start
        hi = _parse_stamp(end) if isinstance(end, str) else end
    except ValueError as exc:
        raise InputError(f"bad --start/--end: {exc}") from None
    xs, ys, stamps = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip().lower() for h in (reader.fieldnames or [])]
        missing = {"date", y_col, x_col} - set(header)
        if missing:
            raise InputError(
                f"{path}: header must name columns date,{y_col},{x_col} (missing {sorted(missing)})"
            )
        reader.fieldnames = header
        for row in reader:
            line = reader.line_num
            try:
                stamp = _parse_stamp(row["date"] or "")
                y = float(row[y_col])
                x = float(row[x_col])
            except (TypeError, ValueError) as exc:
                raise InputError(f"{path}: row {line}: {exc}") from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InputError(f"{path}: row {line}: non-finite value")
            if stamps:
                try:
                    increasing = stamp > stamps[-1]
                except TypeError:
                    raise InputError(f"{path}: row {line}: mixed timestamp types") from None
                if not increasing:
                    raise InputError(f"{path}: row {line}: timestamps must be strictly increasing")
            stamps.append(stamp)
            try:
                if (lo is not None and stamp < lo) or (hi is not None and stamp > hi):
                    continue
            except TypeError:
                raise InputError(f"{path}: row {line}: --start/--end type differs from dates") from None
            xs.append(x)
            ys.append(y)
    if len(xs) < 3:
        raise InputError(f"{path}: need at least 3 rows in range")
    return RegressionSample(np.asarray(xs), np.asarray(ys[1:]))


def write_series(path, sample: RegressionSample) -> None:
    """Inverse of :func:`read_series` with integer timestamps (row 0 has y = 0)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["date", "y", "x"])
        ys = np.concatenate(([0.0], sample.y))
        for t, (y, x) in enumerate(zip(ys, sample.x)):
            w.writerow([t, repr(float(y)), repr(float(x))])


# --------------------------------------------------------------------------- grid files

@dataclass(frozen=True)
class GridCell:
    a: float
    phi: float
    nu: float
    b1: float
    n: int
    level: float
    methods: tuple[str, ...]
    line: int


def parse_grid(text: str, source: str = "<grid>") -> list[GridCell]:
    """Grid lines are ``a phi nu b1 n level methods``; ``#`` starts a comment."""
    cells = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 7:
            raise InputError(f"{source}: line {lineno}: expected 7 fields "
                             f"'a phi nu b1 n level methods', got {len(parts)}")
        try:
            a, phi, nu, b1 = (float(v) for v in parts[:4])
            n = int(parts[4])
            level = float(parts[5])
        except ValueError as exc:
            raise InputError(f"{source}: line {lineno}: {exc}") from None
        methods = tuple(m.strip().upper() for m in parts[6].split(",") if m.strip())
        bad = [m for m in methods if m not in METHOD_NAMES]
        if bad or not methods:
            raise InputError(f"{source}: line {lineno}: unknown method(s) {bad or parts[6]!r}")
        if not 0.0 < level < 1.0:
            raise InputError(f"{source}: line {lineno}: level must lie in (0, 1)")
        try:
            DgpConfig(n=n, a=a, phi=phi, nu=nu, b=(b1,) if b1 != 0.0 else ())
        except InvalidSampleError as exc:
            raise InputError(f"{source}: line {lineno}: {exc}") from None
        cells.append(GridCell(a, phi, nu, b1, n, level, methods, lineno))
    if not cells:
        raise InputError(f"{source}: no grid cells")
    return cells


# --------------------------------------------------------------------------- formatting

def _num(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


def reports_to_tsv(reports: list[ExperimentReport]) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for r in reports:
        d = r.to_dict()
        lines.append("\t".join(repr(d[c]) if isinstance(d[c], float) else str(d[c])
                               for c in TSV_COLUMNS))
    return "\n".join(lines) + "\n"


def reports_to_json(reports: list[ExperimentReport]) -> str:
    rows = [{c: _num(r.to_dict()[c]) for c in TSV_COLUMNS} for r in reports]
    return json.dumps(rows, indent=2) + "\n"


def _aligned(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in pairs)


# --------------------------------------------------------------------------- commands

def cmd_test(args) -> int:
    sample = read_series(args.file, args.y_col, args.x_col, args.start, args.end)
    weight = WeightSpec(args.h)
    d = el_test(sample, args.beta0, 1.0 - args.level, weight, args.mode)
    payload = {
        "beta0": args.beta0,
        "mode": args.mode,
        "h": args.h,
        "level": args.level,
        "n": sample.n,
        "statistic": _num(d.statistic),
        "critical_value": d.critical_value,
        "p_value": d.p_value,
        "decision": "reject" if d.reject else "accept",
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(_aligned([(k, payload[k]) for k in payload]))
    return 0


def cmd_ci(args) -> int:
    sample = read_series(args.file, args.y_col, args.x_col, args.start, args.end)
    weight = WeightSpec(args.h)
    fit = fit_full_model(sample, args.p)
    sets = [confidence_set(sample, lv, weight, args.mode) for lv in args.level]
    payload = {
        "n": sample.n,
        "mode": args.mode,
        "h": args.h,
        "beta_lse": lse_beta(sample),
        "sigma_v_over_sigma_u": fit.sigma_ratio,
        "el_estimate": sets[0].estimate,
        "intervals": [
            {"level": s.level, "lower": s.lower, "upper": s.upper, "disconnected": s.disconnected}
            for s in sets
        ],
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        pairs = [(k, payload[k]) for k in ("n", "mode", "h", "beta_lse", "sigma_v_over_sigma_u",
                                           "el_estimate")]
        for s in sets:
            flag = "  (scan found a gap)" if s.disconnected else ""
            pairs.append((f"I_{s.level:g}", f"[{s.lower:.6g}, {s.upper:.6g}]{flag}"))
        print(_aligned(pairs))
    return 0


def _out_paths(out: str) -> tuple[Path, Path]:
    p = Path(out)
    if p.suffix in (".tsv", ".json"):
        p = p.with_suffix("")
    return p.with_name(p.name + ".tsv"), p.with_name(p.name + ".json")


def cmd_simulate(args) -> int:
    if args.reps < 100:
        raise InputError(f"--reps must be at least 100, got {args.reps}")
    if args.threads < 1:
        raise InputError("--threads must be positive")
    text = Path(args.grid).read_text(encoding="utf-8")
    cells = parse_grid(text, args.grid)
    weight = WeightSpec(args.h)
    reports: list[ExperimentReport] = []
    for cell in cells:
        cfg = DgpConfig(n=cell.n, a=cell.a, phi=cell.phi, nu=cell.nu,
                        b=(cell.b1,) if cell.b1 != 0.0 else (), seed=args.seed)
        reports.extend(run_experiment(cfg, cell.methods, cell.level, args.reps, args.threads,
                                      weight, args.boot, args.boot_p))
        if args.progress:
            print(f"line {cell.line} done", file=sys.stderr)
    tsv, js = reports_to_tsv(reports), reports_to_json(reports)
    if args.out:
        tsv_path, json_path = _out_paths(args.out)
        tsv_path.write_text(tsv, encoding="utf-8")
        json_path.write_text(js, encoding="utf-8")
    sys.stdout.write(js if args.json else tsv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elpredict", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="CSV with header date,y,x")
        p.add_argument("--mode", choices=[m.value for m in InterceptMode], default="unknown",
                       help="intercept handling (default: unknown)")
        p.add_argument("--h", type=float, default=2.0, help="weight exponent h (default: 2)")
        p.add_argument("--json", action="store_true", help="emit JSON instead of aligned text")
        p.add_argument("--y-col", default="y", help="response column (default: y)")
        p.add_argument("--x-col", default="x", help="predictor column (default: x)")
        p.add_argument("--start", help="first date kept, inclusive (e.g. 1926-12)")
        p.add_argument("--end", help="last date kept, inclusive")

    p = sub.add_parser("test", help="EL test of beta = beta0")
    common(p)
    p.add_argument("--beta0", type=float, default=0.0)
    p.add_argument("--level", type=float, default=0.10, help="significance level (default: 0.10)")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("ci", help="EL confidence interval for beta")
    common(p)
    p.add_argument("--level", type=float, action="append",
                   help="confidence level; repeatable (default: 0.90)")
    p.add_argument("--p", type=int, default=0, help="AR order of predictor errors for the sigma ratio")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("simulate", help="Monte Carlo size/power over a grid file")
    p.add_argument("grid", help="grid file: lines of 'a phi nu b1 n level methods'")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output prefix; writes PREFIX.tsv and PREFIX.json")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--h", type=float, default=2.0, help="weight exponent h (default: 2)")
    p.add_argument("--boot", type=int, default=1000, help="bootstrap resamples for NA")
    p.add_argument("--boot-p", type=int, default=1, help="AR order fitted by the NA bootstrap")
    p.add_argument("--json", action="store_true", help="print JSON rather than TSV to stdout")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "level", None) is None and args.command == "ci":
        args.level = [0.90]
    try:
        return args.func(args)
    except (InputError, InvalidSampleError, OSError) as exc:
        print(f"elpredict: error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateSampleError, SolverError) as exc:
        print(f"elpredict: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
