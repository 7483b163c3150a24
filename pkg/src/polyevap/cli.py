"""Command-line front end.

    python -m polyevap lambda --delta 0 --p 0.3 --T 0.7 --mach 0.8
    python -m polyevap evaporation-curve --delta 0 --delta 5 --out evap.csv

Exit codes: 0 success, 1 argument error, 2 numerical or infeasibility
error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import explorer
from .admissibility import check_all
from .entropy import Form, entropy_bound
from .errors import ContractViolation, InfeasibleMomentsError, PolyEvapError
from .gas import FarFieldState, GasParams, classify_regime

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

SCHEMAS = {
    "lambda": ["delta", "p", "T", "mach", "form", "lambda", "boundary_term", "far_field_term", "min_flux_term", "upsilon", "s"],
    "admissible": ["delta", "p", "T", "mach", "condition", "satisfied", "margin"],
    "classify": ["mach", "regime", "k_plus", "l_zero", "free_parameters"],
    "evaporation-curve": ["delta", "mach", "p_sharp", "T_sharp", "lambda_max"],
    "condensation-surface": ["delta", "T", "mach", "p_star", "lambda_max", "boundary_flag"],
    "boundary-surface": ["delta", "T", "mach", "p_lower", "p_upper"],
    "max-mach": ["delta", "max_mach", "admissible_region_mach"],
    "compare": ["mach", "T", "p_reference", "p_computed", "residual", "join_distance", "matched"],
}

# option defaults, applied after the config file so that flags > file > default
DEFAULTS = {
    "delta": [0.0],
    "format": "csv",
    "form": "checked",
    "p_points": 400,
    "join_tol": 5e-3,
}


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def fmt(x) -> str:
    """17 significant digits for floats, so values survive a text round trip."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


@dataclass
class Table:
    command: str
    rows: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return SCHEMAS[self.command]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# polyevap {__version__}\n")
        buf.write(f"# command: {self.command}\n")
        for k, v in self.meta.items():
            buf.write(f"# {k}: {json.dumps(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(r.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        meta = {"tool": "polyevap", "version": __version__, "command": self.command, "columns": self.columns}
        meta.update(self.meta)
        rows = [{c: _json_value(r.get(c)) for c in self.columns} for r in self.rows]
        return json.dumps({"meta": meta, "rows": rows}, indent=1) + "\n"


def _json_value(x):
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--delta", type=float, action="append", help="internal degrees of freedom (repeatable)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--config", help="key=value file; flags take precedence")

    state = _Parser(add_help=False)
    state.add_argument("--p", type=float)
    state.add_argument("--T", type=float)
    state.add_argument("--mach", type=float)

    grids = _Parser(add_help=False)
    for name in ("mach", "T", "p"):
        grids.add_argument(f"--{name}-min", type=float, dest=f"{name}_min")
        grids.add_argument(f"--{name}-max", type=float, dest=f"{name}_max")
    grids.add_argument("--mach-step", type=float, dest="mach_step")
    grids.add_argument("--T-step", type=float, dest="T_step")
    grids.add_argument("--p-points", type=int, dest="p_points")

    parser = _Parser(prog="polyevap", description="Entropy bounds for polyatomic evaporation and condensation.")
    parser.add_argument("--version", action="version", version=f"polyevap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("lambda", parents=[common, state], help="entropy-production bound at one state")
    sp.add_argument("--form", choices=[f.value for f in Form])
    sub.add_parser("admissible", parents=[common, state], help="necessary conditions with margins")
    sp = sub.add_parser("classify", parents=[common, grids], help="regime signature per Mach number")
    sp.add_argument("--mach", type=float, action="append")
    sub.add_parser("evaporation-curve", parents=[common, grids], help="maximal entropy production curve p#(M), T#(M)")
    sp = sub.add_parser("condensation-surface", parents=[common, grids], help="maximal entropy production surface p*(T, M)")
    sp.add_argument("--T", type=float, action="append")
    sp.add_argument("--mach", type=float, action="append")
    sp = sub.add_parser("boundary-surface", parents=[common, grids], help="p-intervals where Lambda > 0")
    sp.add_argument("--T", type=float, action="append")
    sp.add_argument("--mach", type=float, action="append")
    sub.add_parser("max-mach", parents=[common], help="largest evaporation Mach number with Lambda >= 0")
    sp = sub.add_parser("compare", parents=[common], help="deviation statistics against a reference table")
    sp.add_argument("--reference", help="reference CSV")
    sp.add_argument("--computed", help="CSV produced by this tool")
    sp.add_argument("--join-tol", type=float, dest="join_tol", help="largest nearest-neighbour distance counted as a match")
    return parser


def load_config(path: str) -> dict:
    """Flat ``key = value`` file; '#' starts a comment, repeated keys accumulate."""
    out: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ArgumentError(f"{path}:{lineno}: expected key=value")
            k, v = (t.strip() for t in line.split("=", 1))
            out.setdefault(k.replace("-", "_"), []).append(v)
    return out


LIST_KEYS = {"delta", "mach", "T"}
STR_KEYS = {"format", "form", "out", "reference", "computed"}


def _apply_config(args: argparse.Namespace, cfg: dict) -> None:
    single_state = args.command in ("lambda", "admissible")
    for key, values in cfg.items():
        if key in ("config", "command") or not hasattr(args, key):
            raise ArgumentError(f"unknown config key {key!r} for command {args.command}")
        if getattr(args, key) is not None:
            continue
        try:
            if key in STR_KEYS:
                val = values[-1]
            elif key == "p_points":
                val = int(values[-1])
            elif key == "delta" or (key in LIST_KEYS and not single_state):
                val = [float(t) for v in values for t in v.split(",") if t.strip()]
            else:
                val = float(values[-1])
        except ValueError:
            raise ArgumentError(f"bad value for config key {key!r}: {values[-1]!r}") from None
        setattr(args, key, val)


def make_grid(lo: float, hi: float, step: float, name: str) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi) and step > 0.0) or hi < lo:
        raise ArgumentError(f"{name} grid needs min <= max and step > 0")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(n)]


def _axis(args, name, defaults, explicit=None):
    if explicit:
        vals = sorted(float(v) for v in explicit)
        return vals
    lo = getattr(args, f"{name}_min")
    hi = getattr(args, f"{name}_max")
    step = getattr(args, f"{name}_step")
    d_lo, d_hi, d_step = defaults
    return make_grid(d_lo if lo is None else lo, d_hi if hi is None else hi, d_step if step is None else step, name)


def _gases(args) -> list[GasParams]:
    out = []
    for d in args.delta:
        try:
            out.append(GasParams(d))
        except ContractViolation as e:
            raise ArgumentError(str(e)) from None
    return out


def _state(args) -> FarFieldState:
    missing = [n for n in ("p", "T", "mach") if getattr(args, n) is None]
    if missing:
        raise ArgumentError("missing state flags: " + ", ".join("--" + m for m in missing))
    try:
        return FarFieldState(args.p, args.T, args.mach)
    except ContractViolation as e:
        raise ArgumentError(str(e)) from None


def cmd_lambda(args) -> Table:
    st = _state(args)
    t = Table("lambda", meta={"form": args.form})
    for gas in _gases(args):
        b = entropy_bound(st, gas, form=args.form)
        t.rows.append(
            {
                "delta": gas.delta, "p": st.p, "T": st.T, "mach": st.mach, "form": args.form,
                "lambda": b.value, "boundary_term": b.boundary_term, "far_field_term": b.far_field_term,
                "min_flux_term": b.min_flux_term, "upsilon": b.upsilon, "s": b.s,
            }
        )
    if args.form == Form.CHECKED.value:
        t.meta["cross_check"] = "direct and recast forms agree"
    return t


def cmd_admissible(args) -> Table:
    st = _state(args)
    t = Table("admissible")
    for gas in _gases(args):
        rep = check_all(st, gas)
        for name, res in rep.applicable().items():
            t.rows.append({"delta": gas.delta, "p": st.p, "T": st.T, "mach": st.mach, "condition": name, "satisfied": res.satisfied, "margin": res.margin})
        t.rows.append({"delta": gas.delta, "p": st.p, "T": st.T, "mach": st.mach, "condition": "admissible", "satisfied": rep.admissible, "margin": None})
        t.meta[f"regime[delta={fmt(gas.delta)}]"] = rep.regime.regime.value
    return t


def cmd_classify(args) -> Table:
    grid = _axis(args, "mach", (-2.5, 2.5, 0.5), args.mach)
    t = Table("classify", meta={"mach_grid": _grid_meta(grid)})
    for m in grid:
        r = classify_regime(m)
        t.rows.append({"mach": m, "regime": r.regime.value, "k_plus": r.k_plus, "l_zero": r.l_zero, "free_parameters": r.free_parameters})
    return t


def _grid_meta(grid: Sequence[float]) -> dict:
    return {"min": grid[0], "max": grid[-1], "n": len(grid)}


def _with_cell(err: PolyEvapError, where: str) -> PolyEvapError:
    err.args = (f"{err.args[0] if err.args else err} [{where}]",) + tuple(err.args[1:])
    return err


def cmd_evaporation_curve(args) -> Table:
    grid = _axis(args, "mach", (0.0, 1.75, 0.01))
    if grid[0] < 0.0:
        raise ArgumentError("evaporation Mach numbers must be >= 0")
    t = Table("evaporation-curve", meta={"delta": args.delta, "mach_grid": _grid_meta(grid)})
    for gas in _gases(args):
        try:
            curve = explorer.evaporation_curve(gas, grid)
        except PolyEvapError as e:
            raise _with_cell(e, f"delta={gas.delta!r}")
        for pt in curve:
            t.rows.append({"delta": gas.delta, "mach": pt.mach, "p_sharp": pt.p_sharp, "T_sharp": pt.t_sharp, "lambda_max": pt.lambda_max})
        t.meta[f"excluded[delta={fmt(gas.delta)}]"] = curve.excluded
    return t


def cmd_condensation_surface(args) -> Table:
    ts = _axis(args, "T", (0.1, 3.0, 0.05), args.T)
    ms = _axis(args, "mach", (-2.5, -0.01, 0.01), args.mach)
    if ms[-1] >= 0.0 or ts[0] <= 0.0:
        raise ArgumentError("condensation needs mach < 0 and T > 0")
    bounds = None
    if args.p_min is not None or args.p_max is not None:
        bounds = (args.p_min if args.p_min is not None else 1e-3, args.p_max if args.p_max is not None else explorer.CONDENSATION_P_CAP)
    t = Table("condensation-surface", meta={"delta": args.delta, "T_grid": _grid_meta(ts), "mach_grid": _grid_meta(ms), "p_bounds": bounds})
    for gas in _gases(args):
        try:
            surf = explorer.condensation_surface(gas, ts, ms, p_bounds=bounds)
        except PolyEvapError as e:
            raise _with_cell(e, f"delta={gas.delta!r}")
        for s in surf:
            t.rows.append({"delta": gas.delta, "T": s.temperature, "mach": s.mach, "p_star": s.p_star, "lambda_max": s.lambda_max, "boundary_flag": s.boundary})
        t.meta[f"missing[delta={fmt(gas.delta)}]"] = [list(c) for c in surf.missing]
    return t


def cmd_boundary_surface(args) -> Table:
    ts = _axis(args, "T", (0.1, 3.0, 0.05), args.T)
    ms = _axis(args, "mach", (-2.5, 1.75, 0.05), args.mach)
    p_min = 0.02 if args.p_min is None else args.p_min
    p_max = explorer.CONDENSATION_P_CAP if args.p_max is None else args.p_max
    if not 0.0 < p_min < p_max or args.p_points < 2:
        raise ArgumentError("need 0 < p-min < p-max and p-points >= 2")
    t = Table("boundary-surface", meta={"delta": args.delta, "T_grid": _grid_meta(ts), "mach_grid": _grid_meta(ms), "p_scan": [p_min, p_max, args.p_points]})
    for gas in _gases(args):
        try:
            rows = explorer.boundary_surface(gas, ts, ms, p_min, p_max, args.p_points)
        except PolyEvapError as e:
            raise _with_cell(e, f"delta={gas.delta!r}")
        for b in rows:
            t.rows.append({"delta": gas.delta, "T": b.temperature, "mach": b.mach, "p_lower": b.p_lower, "p_upper": b.p_upper})
    return t


def cmd_max_mach(args) -> Table:
    t = Table("max-mach")
    for gas in _gases(args):
        t.rows.append({"delta": gas.delta, "max_mach": explorer.max_positive_mach(gas), "admissible_region_mach": explorer.admissible_region_mach_limit(gas)})
    return t


# --- compare ----------------------------------------------------------------


@dataclass
class ComparisonStats:
    n_points: int
    rms_deviation: float
    max_deviation: float
    residuals: list[dict]


def read_table(path: str) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#") and ln.strip()]
    return list(csv.DictReader(lines))


def _num(row: dict, *names) -> Optional[float]:
    for n in names:
        v = row.get(n)
        if v not in (None, ""):
            return float(v)
    return None


def compare_tables(reference: list[dict], computed: list[dict], delta: Optional[float] = None, join_tol: float = 5e-3) -> ComparisonStats:
    """Nearest-neighbour join of reference rows onto computed rows.

    The join uses mach, plus T when the reference has a T column. Pressure
    columns are ``p`` (reference) and ``p``, ``p_sharp`` or ``p_star``
    (computed). Rows farther than ``join_tol`` from any computed row are
    listed but left out of the statistics.
    """
    if not reference or not computed:
        raise PolyEvapError("empty table in comparison")
    if "delta" in computed[0]:
        deltas = sorted({float(r["delta"]) for r in computed})
        if delta is None:
            if len(deltas) > 1:
                raise ArgumentError(f"computed table holds several deltas {deltas}; choose one with --delta")
            delta = deltas[0]
        computed = [r for r in computed if float(r["delta"]) == delta]
    surface = "T" in reference[0]
    comp = []
    for r in computed:
        key = (_num(r, "mach"), _num(r, "T") if surface else 0.0)
        p = _num(r, "p", "p_sharp", "p_star")
        if None in key or p is None:
            raise ArgumentError("computed table needs mach, p and (for surfaces) T columns")
        comp.append((key, p))
    keys = np.array([k for k, _ in comp])
    out = []
    for r in reference:
        m, tt, p_ref = _num(r, "mach"), (_num(r, "T") if surface else 0.0), _num(r, "p")
        if None in (m, tt, p_ref):
            raise ArgumentError("reference rows need mach, p and (for surfaces) T")
        dist = np.hypot(keys[:, 0] - m, keys[:, 1] - tt)
        k = int(np.argmin(dist))
        p_c = comp[k][1]
        out.append({"mach": m, "T": tt if surface else None, "p_reference": p_ref, "p_computed": p_c, "residual": p_c - p_ref, "join_distance": float(dist[k]), "matched": bool(dist[k] <= join_tol)})
    res = np.array([o["residual"] for o in out if o["matched"]])
    if res.size == 0:
        raise PolyEvapError("no reference row matched a computed row within the join tolerance")
    return ComparisonStats(int(res.size), float(np.sqrt(np.mean(res**2))), float(np.max(np.abs(res))), out)


def cmd_compare(args) -> Table:
    if not args.reference or not args.computed:
        raise ArgumentError("compare needs --reference and --computed")
    delta = args.delta[0] if args.delta_given else None
    stats = compare_tables(read_table(args.reference), read_table(args.computed), delta, args.join_tol)
    t = Table("compare", rows=stats.residuals)
    t.meta.update({"n_points": stats.n_points, "rms_deviation": stats.rms_deviation, "max_deviation": stats.max_deviation})
    return t


COMMANDS = {
    "lambda": cmd_lambda,
    "admissible": cmd_admissible,
    "classify": cmd_classify,
    "evaporation-curve": cmd_evaporation_curve,
    "condensation-surface": cmd_condensation_surface,
    "boundary-surface": cmd_boundary_surface,
    "max-mach": cmd_max_mach,
    "compare": cmd_compare,
}


def parse_args(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.config:
        try:
            cfg = load_config(args.config)
        except OSError as e:
            raise ArgumentError(f"cannot read config: {e}") from None
        _apply_config(args, cfg)
    args.delta_given = args.delta is not None
    for k, v in DEFAULTS.items():
        if getattr(args, k, None) is None and hasattr(args, k):
            setattr(args, k, v)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        table = COMMANDS[args.command](args)
    except ArgumentError as e:
        print(f"polyevap: argument error: {e}", file=sys.stderr)
        return EXIT_ARGS
    except InfeasibleMomentsError as e:
        print(f"polyevap: infeasible: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ContractViolation as e:
        print(f"polyevap: argument error: {e}", file=sys.stderr)
        return EXIT_ARGS
    except PolyEvapError as e:
        print(f"polyevap: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"polyevap: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    text = table.to_json() if args.format == "json" else table.to_csv()
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as e:
        print(f"polyevap: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK
