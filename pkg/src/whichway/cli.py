"""Command-line interface: config ingestion, runs and sweeps, CSV/JSON emission.

Exit codes: 0 success, 1 configuration/validation problem, 2 numeric failure.
Output bytes are a deterministic function of the config (floats serialized
with 17 significant digits; run chatter goes to stderr).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .analysis import bohr_analysis, duality_report
from .errors import NumericFailure, ValidationError
from .packets import Geometry
from .pattern import (
    JointState,
    ScreenGrid,
    closed_form_parts,
    conditional_patterns,
    default_grid,
    fringe_width,
)
from .qubit import (
    bloch_sphere_lattice,
    make_detector_pair,
    rotated_basis,
    state_from_bloch,
    sum_uncertainty,
)

_SCHEMA = json.loads(
    resources.files("whichway").joinpath("config_schema.json").read_text(encoding="utf-8")
)
# same $defs, different entry point
_SWEEP_SCHEMA = {**_SCHEMA, "$ref": "#/$defs/sweep"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; 2 is reserved for numeric
    # failures here, so route usage problems through the config-error path.
    def error(self, message):
        raise _UsageError(message)


def _fmt(value) -> str:
    """Serialize one cell: floats at 17 significant digits, bools lowercase."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _emit_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit_json(obj) -> str:
    # hand-rolled so floats keep the 17-digit contract (json.dumps uses repr)
    def render(v):
        if isinstance(v, dict):
            return "{" + ", ".join(f"{json.dumps(k)}: {render(x)}" for k, x in v.items()) + "}"
        if isinstance(v, (list, tuple)):
            return "[" + ", ".join(render(x) for x in v) + "]"
        if isinstance(v, str):
            return json.dumps(v)
        return _fmt(v)

    return render(obj) + "\n"


def _columns_to_json(header: list[str], rows: list[list]) -> dict:
    return {name: [row[i] for row in rows] for i, name in enumerate(header)}


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {path}", file=sys.stderr)


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    geometry: Geometry
    overlap: float
    phase: float
    grid: ScreenGrid | None
    eraser_enabled: bool
    basis_angle: float
    out_format: str | None
    out_path: str | None


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc


def _run_config_from_dict(raw: dict) -> RunConfig:
    try:
        jsonschema.validate(raw, _SCHEMA)
    except jsonschema.exceptions.ValidationError as exc:
        raise ValidationError(f"config rejected by schema: {exc.message}") from exc
    geo = raw["geometry"]
    geometry = Geometry(
        wavelength=geo["lambda_d"],
        slit_sep=geo["slit_sep"],
        screen_dist=geo["screen_dist"],
        packet_width=geo["packet_width"],
    )
    grid_cfg = raw.get("grid")
    grid = None
    if grid_cfg is not None:
        grid = ScreenGrid(grid_cfg["x_min"], grid_cfg["x_max"], grid_cfg["n_points"])
    eraser = raw.get("eraser", {})
    output = raw.get("output", {})
    return RunConfig(
        geometry=geometry,
        overlap=raw["detector"]["overlap"],
        phase=raw["detector"].get("phase", 0.0),
        grid=grid,
        eraser_enabled=eraser.get("enabled", False),
        basis_angle=eraser.get("basis_angle", math.pi / 4.0),
        out_format=output.get("format"),
        out_path=output.get("path"),
    )


def load_run_config(path: str) -> RunConfig:
    return _run_config_from_dict(_load_json(path))


def load_sweep_config(path: str) -> tuple[RunConfig, str, list[float]]:
    raw = _load_json(path)
    try:
        jsonschema.validate(raw, _SWEEP_SCHEMA)
    except jsonschema.exceptions.ValidationError as exc:
        raise ValidationError(f"sweep config rejected by schema: {exc.message}") from exc
    base = _run_config_from_dict(raw["base"])
    param = raw["sweep_param"]
    values = [float(v) for v in raw["values"]]
    for v in values:
        if param == "overlap" and not 0.0 <= v <= 1.0:
            raise ValidationError(f"sweep overlap value {v!r} outside [0, 1]")
        if param in ("packet_width", "screen_dist") and v <= 0.0:
            raise ValidationError(f"sweep {param} value {v!r} must be positive")
        if not math.isfinite(v):
            raise ValidationError(f"sweep value {v!r} is not finite")
    return base, param, values


def _resolve_grid(cfg: RunConfig) -> ScreenGrid:
    return cfg.grid if cfg.grid is not None else default_grid(cfg.geometry)


def _resolve_output(cfg_fmt, cfg_path, args, default_fmt: str) -> tuple[str, str | None]:
    fmt = args.format or cfg_fmt or default_fmt
    path = args.out or cfg_path
    return fmt, path


def _check_finite(name: str, arr: np.ndarray):
    if not np.all(np.isfinite(arr)):
        raise NumericFailure(f"non-finite values in the {name} column")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_pattern(args) -> int:
    cfg = load_run_config(args.config)
    pair = make_detector_pair(cfg.overlap, cfg.phase)
    js = JointState(cfg.geometry, pair)
    grid = _resolve_grid(cfg)
    if cfg.overlap > 0.0 and grid.spacing() > fringe_width(cfg.geometry) / 8.0:
        raise ValidationError("grid spacing cannot resolve the fringes (need <= w/8)")
    xs = grid.xs()
    envelope, interference = closed_form_parts(xs, js)
    intensity = envelope + interference
    for name, arr in (("intensity", intensity), ("envelope", envelope),
                      ("interference_term", interference)):
        _check_finite(name, arr)
    if intensity.min() < -1e-15:
        raise NumericFailure(f"intensity {intensity.min()!r} below the clamp floor")
    intensity = np.where(intensity < 0.0, 0.0, intensity)
    total = float(np.trapezoid(intensity, xs))
    if not (math.isfinite(total) and total > 0.0):
        raise NumericFailure(f"pattern integral {total!r} is not a positive number")
    header = ["x_m", "intensity", "envelope", "interference_term"]
    rows = [
        [float(x), float(i / total), float(e / total), float(t / total)]
        for x, i, e, t in zip(xs, intensity, envelope, interference)
    ]
    fmt, path = _resolve_output(cfg.out_format, cfg.out_path, args, "csv")
    text = _emit_csv(header, rows) if fmt == "csv" else _emit_json(_columns_to_json(header, rows))
    _write_output(text, path)
    return 0


def _config_for_sweep(base: RunConfig, param: str, value: float) -> tuple[Geometry, float, float]:
    geometry, overlap, phase = base.geometry, base.overlap, base.phase
    if param == "overlap":
        overlap = value
    elif param == "phase":
        phase = value
    elif param == "packet_width":
        geometry = Geometry(geometry.wavelength, geometry.slit_sep,
                            geometry.screen_dist, value)
    elif param == "screen_dist":
        geometry = Geometry(geometry.wavelength, geometry.slit_sep,
                            value, geometry.packet_width)
    return geometry, overlap, phase


def _cmd_scan_duality(args) -> int:
    base, param, values = load_sweep_config(args.config)
    header = ["s", "D", "V_bound", "V_numeric", "dP2", "dQ2", "lhs", "rhs_unc",
              "egy_ok", "unc_ok"]
    rows = []
    for value in values:
        geometry, overlap, phase = _config_for_sweep(base, param, value)
        pair = make_detector_pair(overlap, phase)
        grid = base.grid if base.grid is not None else default_grid(geometry)
        rep = duality_report(geometry, pair, grid)
        rows.append([pair.overlap_mag, rep.D, rep.V_bound, rep.V_numeric, rep.dP2,
                     rep.dQ2, rep.lhs, rep.rhs_unc, rep.egy_ok, rep.unc_ok])
    fmt, path = _resolve_output(base.out_format, base.out_path, args, "csv")
    text = _emit_csv(header, rows) if fmt == "csv" else _emit_json(_columns_to_json(header, rows))
    _write_output(text, path)
    return 0


def _cmd_eraser(args) -> int:
    cfg = load_run_config(args.config)
    if not cfg.eraser_enabled:
        raise ValidationError("eraser subcommand requires eraser.enabled = true in the config")
    pair = make_detector_pair(cfg.overlap, cfg.phase)
    js = JointState(cfg.geometry, pair)
    basis = rotated_basis(cfg.basis_angle)
    er = conditional_patterns(_resolve_grid(cfg), js, basis)
    xs = er.i_b.grid.xs()
    header = ["x_m", "i_q1", "i_q2", "i_sum"]
    rows = [
        [float(x), float(a), float(b), float(c)]
        for x, a, b, c in zip(xs, er.i_b.intensity, er.i_b_perp.intensity, er.i_sum.intensity)
    ]
    fmt, path = _resolve_output(cfg.out_format, cfg.out_path, args, "csv")
    text = _emit_csv(header, rows) if fmt == "csv" else _emit_json(_columns_to_json(header, rows))
    _write_output(text, path)
    return 0


def _cmd_uncertainty_scan(args) -> int:
    if args.samples < 1:
        raise ValidationError(f"samples must be >= 1, got {args.samples}")
    lattice = bloch_sphere_lattice(args.samples)
    header = ["n1", "n2", "n3", "var_sigma2", "var_sigma3", "sum"]
    rows = []
    min_sum = math.inf
    for n1, n2, n3 in lattice:
        state = state_from_bloch(n1, n2, n3)
        dq2, dp2, total = sum_uncertainty(state)
        min_sum = min(min_sum, total)
        rows.append([float(n1), float(n2), float(n3), dq2, dp2, total])
    fmt, path = _resolve_output(None, None, args, "csv")
    if fmt == "csv":
        text = _emit_csv(header, rows)
        text += f"min_sum,,,,,{_fmt(min_sum)}\n"
    else:
        obj = _columns_to_json(header, rows)
        obj["min_sum"] = min_sum
        text = _emit_json(obj)
    _write_output(text, path)
    return 0


def _cmd_bohr(args) -> int:
    cfg = load_run_config(args.config)
    rep = bohr_analysis(cfg.geometry)
    for name in ("delta_px", "delta_x", "fringe_sep", "ratio"):
        if not math.isfinite(getattr(rep, name)):
            raise NumericFailure(f"non-finite {name} in recoil report")
    fmt, path = _resolve_output(cfg.out_format, cfg.out_path, args, "json")
    payload = {
        "delta_px": rep.delta_px,
        "delta_x": rep.delta_x,
        "fringe_sep": rep.fringe_sep,
        "ratio": rep.ratio,
    }
    if fmt == "json":
        text = _emit_json(payload)
    else:
        text = _emit_csv(list(payload), [list(payload.values())])
    _write_output(text, path)
    return 0


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(
        prog="whichway",
        description="Which-way double-slit toolkit: patterns, duality scans, "
                    "quantum eraser, uncertainty sweeps, recoil estimates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, func, needs_config=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if needs_config:
            p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", default=None, choices=["csv", "json"],
                       help="output format (default: csv; bohr defaults to json)")
        p.set_defaults(func=func)
        return p

    add("pattern", "screen pattern with envelope/interference decomposition", _cmd_pattern)
    add("scan-duality", "distinguishability/visibility duality table over a sweep",
        _cmd_scan_duality)
    add("eraser", "conditioned fringe/antifringe patterns for a detector basis", _cmd_eraser)
    scan = add("uncertainty-scan", "qubit sum-uncertainty over a Bloch-sphere lattice",
               _cmd_uncertainty_scan, needs_config=False)
    scan.add_argument("--samples", type=int, default=10000,
                      help="number of lattice points (default 10000)")
    add("bohr", "recoil-argument report for the configured geometry", _cmd_bohr)
    return parser


def main(argv=None) -> int:
    """Run the CLI; returns the process exit code instead of calling sys.exit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


def run():
    """Console-script entry point."""
    raise SystemExit(main())
