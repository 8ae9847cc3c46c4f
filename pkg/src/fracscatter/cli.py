"""Command-line interface: scatter, trace, blueshift, survey, version.

Every run produces a ResultEnvelope whose config echo is sufficient to
reproduce it exactly (see :func:`rerun`).  Exit codes: 0 success, 1 usage
error, 2 numerical failure, 3 success with anomalies (partial results).
"""

import argparse
import os
import sys
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import __version__, svgplot
from .errors import FracScatterError
from .locus import Branch, LocusKind, SIGMA_MIN
from .medium import BarrierSpec, UnitMode, UnitSystem
from .output import (ResultEnvelope, Table, make_timestamp, read_envelope,
                     atomic_write_text, write_envelope_json, write_table_csv)
from .scattering import scan_coefficients
from .tracer import (DEFAULT_RESOLUTION, DEFAULT_RHO_RANGE, DEFAULT_SIGMA_MAX,
                     DEFAULT_STEPS, DEFAULT_N_MAX, ROOT_TOL, TRACE_TOL, SurveyGrid,
                     blue_shift_scan, blue_shift_verdict, branch_survey, trace_curve)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_PARTIAL = 3

#: Named parameter presets for the reference figures.
RECIPES = {
    "fig1a": {"kind": "ss", "alphas": [2.0], "ns": [1, 2, 3, 4, 5],
              "rho_range": [-2.0, 0.995]},
    "fig1b": {"kind": "ss", "alphas": [1.000005], "ns": [1, 2, 3, 4, 5],
              "rho_range": [-2.0, 0.995]},
    "fig2a": {"kind": "ss", "alphas": [2.0, 1.8, 1.5], "ns": [2], "rho_range": [-1.0, 0.9]},
    "fig2b": {"kind": "ss", "alphas": [2.0, 1.8, 1.5], "ns": [3], "rho_range": [-1.0, 0.9]},
    "fig2c": {"kind": "cpa", "alphas": [2.0, 1.8, 1.5], "ns": [2], "rho_range": [-1.0, 0.9]},
    "fig2d": {"kind": "cpa", "alphas": [2.0, 1.8, 1.5], "ns": [3], "rho_range": [-1.0, 0.9]},
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration; every field has a documented default."""

    mode: str = "natural"
    u: float | None = None
    hbar: float | None = None
    mass: float | None = None
    sigma_min: float = SIGMA_MIN
    sigma_max: float = DEFAULT_SIGMA_MAX
    rho_min: float = DEFAULT_RHO_RANGE[0]
    rho_max: float = DEFAULT_RHO_RANGE[1]
    scan_steps: int = DEFAULT_STEPS
    resolution: int = DEFAULT_RESOLUTION
    trace_tol: float = TRACE_TOL
    root_tol: float = ROOT_TOL
    n_max: int = DEFAULT_N_MAX
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "json", "svg")

    def units(self) -> UnitSystem:
        if self.mode == "natural":
            return UnitSystem.natural(u=self.u if self.u is not None else 1.0)
        if self.mode == "physical":
            base = UnitSystem.physical(u=self.u, mass=self.mass)
            if self.hbar is not None:
                base = UnitSystem(hbar=self.hbar, mass=base.mass, u=base.u,
                                  mode=UnitMode.PHYSICAL)
            return base
        raise UsageError(f"unknown unit mode {self.mode!r} (natural|physical)")


_CONFIG_TYPES = {
    "mode": str, "u": float, "hbar": float, "mass": float,
    "sigma_min": float, "sigma_max": float, "rho_min": float, "rho_max": float,
    "scan_steps": int, "resolution": int, "trace_tol": float, "root_tol": float,
    "n_max": int, "out_dir": str,
}


def load_config_file(path: str) -> dict:
    """Parse the flat ``key = value`` config format (# starts a comment)."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = (s.strip() for s in line.partition("="))
        if key == "formats":
            values[key] = tuple(s.strip() for s in val.split(",") if s.strip())
            continue
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_TYPES[key](val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def build_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(ns, "config", None):
        cfg = replace(cfg, **load_config_file(ns.config))
    if getattr(ns, "out", None):
        cfg = replace(cfg, out_dir=ns.out)
    if getattr(ns, "format", None):
        formats = tuple(s.strip() for s in ns.format.split(",") if s.strip())
        unknown = set(formats) - {"csv", "json", "svg"}
        if unknown or not formats:
            raise UsageError(f"unsupported output formats: {sorted(unknown) or 'none'}")
        cfg = replace(cfg, formats=formats)
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: RunConfig) -> None:
    if cfg.trace_tol <= 0 or cfg.root_tol <= 0 or cfg.sigma_min <= 0:
        raise UsageError("tolerances must be positive")
    if cfg.sigma_max <= cfg.sigma_min:
        raise UsageError("sigma_max must exceed sigma_min")
    if not cfg.rho_min < cfg.rho_max:
        raise UsageError("rho window is empty")
    if not cfg.formats:
        raise UsageError("at least one output format is required")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1, not argparse's 2
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="fracscatter",
                     description="Non-Hermitian scattering of a complex rectangular "
                                 "barrier in space-fractional quantum mechanics: "
                                 "transmission scans and loci of spectral "
                                 "singularities / coherent perfect absorption.")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", help="output directory (default: out)")
    parser.add_argument("--format", help="comma list of csv,json,svg")
    parser.add_argument("--seedless", action="store_true",
                        help="reserved; runs are deterministic by construction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="transmission/reflection over an energy grid")
    p.add_argument("--vr", type=float, required=True, help="Re V (energy units)")
    p.add_argument("--vi", type=float, required=True, help="Im V (energy units)")
    p.add_argument("--d", type=float, required=True, help="barrier half-width")
    p.add_argument("--alpha", type=float, required=True, help="Levy index in (1, 2]")
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--points", type=int, required=True)

    p = sub.add_parser("trace", help="trace locus curves in the (rho, sigma) plane")
    p.add_argument("--kind", choices=["ss", "cpa"], default="ss")
    p.add_argument("--alpha", type=float, action="append", dest="alphas",
                   help="repeatable; default 2.0")
    p.add_argument("--n", type=int, action="append", dest="ns",
                   help="repeatable; default 1..5")
    p.add_argument("--rho-range", help="LO:HI (default from config)")
    p.add_argument("--resolution", type=int, help="number of rho columns")
    p.add_argument("--all-branches", action="store_true",
                   help="also trace the plus branch (survey use)")
    p.add_argument("--recipe", choices=sorted(RECIPES),
                   help="named preset reproducing a reference figure")

    p = sub.add_parser("blueshift", help="SS/CPA energy versus Levy index on a fixed ray")
    p.add_argument("--ratio", type=float, required=True, help="V_i / V_r of the ray")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphas", required=True, help="comma list, e.g. 2.0,1.9,1.8")
    p.add_argument("--d", type=float, required=True,
                   help="half-width anchoring the first (largest-alpha) row")
    p.add_argument("--kind", choices=["ss", "cpa"], default="ss")

    p = sub.add_parser("survey", help="branch/mode admissibility survey")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n-min", type=int, default=-2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--grid", default="50x50", help="COLSxSTEPS, e.g. 50x50")

    sub.add_parser("version", help="print the tool version")
    return parser


# ---------------------------------------------------------------------------
# command implementations (shared by main() and rerun())
# ---------------------------------------------------------------------------

def _cmd_scatter(cfg: RunConfig, args: dict):
    if args["points"] < 1:
        raise UsageError("--points must be >= 1")
    if args["emin"] <= 0:
        raise UsageError("--emin must be positive")
    if args["points"] > 1 and not args["emin"] < args["emax"]:
        raise UsageError("--emin must be below --emax")
    barrier = BarrierSpec(v_r=args["vr"], v_i=args["vi"], d=args["d"])
    grid = np.linspace(args["emin"], args["emax"], args["points"])
    rows = scan_coefficients(grid, barrier, args["alpha"], cfg.units())
    table = Table(name="scatter",
                  columns=["E", "T", "R_left", "R_right", "ss_flag", "error"],
                  rows=[[r.E, r.T, r.R_left, r.R_right, r.ss_flag, r.error] for r in rows])
    anomalies = [{"code": "row-error", "E": r.E, "message": r.error}
                 for r in rows if r.error]
    anomalies += [{"code": "ss-signal", "E": r.E,
                   "message": "spectral-singularity signal: divergent T and R"}
                  for r in rows if r.ss_flag]
    curves = [svgplot.Curve("T", [r.E for r in rows],
                            [r.T if r.T is not None else float("nan") for r in rows]),
              svgplot.Curve("R_left", [r.E for r in rows],
                            [r.R_left if r.R_left is not None else float("nan") for r in rows]),
              svgplot.Curve("R_right", [r.E for r in rows],
                            [r.R_right if r.R_right is not None else float("nan") for r in rows])]
    svg = svgplot.render(curves, title="Transmission and reflection coefficients",
                         xlabel="E", ylabel="coefficient")
    payload = {"kind": "scatter_table", "table": table.to_dict()}
    return payload, [table], svg, anomalies


def _parse_rho_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"--rho-range expects LO:HI, got {text!r}") from exc
    return lo, hi


def _cmd_trace(cfg: RunConfig, args: dict):
    if args.get("recipe"):
        preset = RECIPES[args["recipe"]]
        kind = LocusKind(preset["kind"])
        alphas = preset["alphas"]
        ns = preset["ns"]
        rho_range = tuple(preset["rho_range"])
    else:
        kind = LocusKind(args.get("kind") or "ss")
        alphas = args.get("alphas") or [2.0]
        ns = args.get("ns") or [1, 2, 3, 4, 5]
        rho_range = (_parse_rho_range(args["rho_range"])
                     if args.get("rho_range") else (cfg.rho_min, cfg.rho_max))
    if not alphas or not ns:
        raise UsageError("trace needs at least one --alpha and one --n")
    if any(abs(n) > cfg.n_max for n in ns):
        raise UsageError(f"|n| is capped at n_max = {cfg.n_max} (raise it in the config)")
    if not rho_range[0] < rho_range[1]:
        raise UsageError(f"empty rho range {rho_range[0]}:{rho_range[1]}")
    resolution = args.get("resolution") or cfg.resolution
    if resolution < 2:
        raise UsageError("--resolution must be >= 2")
    branches = [Branch.MINUS, Branch.PLUS] if args.get("all_branches") else [Branch.MINUS]

    traces = []
    anomalies = []
    long_rows = []
    curves = []
    for alpha in alphas:
        for n in ns:
            for branch in branches:
                trace = trace_curve(alpha, n, branch, kind, rho_range, resolution,
                                    sigma_window=None, steps=cfg.scan_steps,
                                    trace_tol=cfg.trace_tol, root_tol=cfg.root_tol,
                                    sigma_min=cfg.sigma_min)
                traces.append(trace)
                anomalies.extend(trace.meta["warnings"])
                label = f"alpha={alpha} n={n}" + ("" if branch is Branch.MINUS else " (+)")
                for p in trace.points:
                    long_rows.append([p.alpha, p.n, p.branch.value, p.kind.value,
                                      p.rho, p.sigma, p.H, p.residual_rel])
                xs, ys = _segmented_xy(trace)
                curves.append(svgplot.Curve(label, xs, ys))
    table = Table(name="trace",
                  columns=["alpha", "n", "branch", "kind", "rho", "sigma", "H",
                           "residual_rel"],
                  rows=long_rows)
    payload = {
        "kind": "trace_set",
        "traces": [{"meta": t.meta,
                    "points": [[p.rho, p.sigma, p.H, p.residual_rel] for p in t.points]}
                   for t in traces],
        "table": table.to_dict(),
    }
    svg = svgplot.render(curves,
                         title=f"{kind.value.upper()} loci in the (rho, sigma) plane",
                         xlabel="rho = V_r/E", ylabel="sigma = V_i/E")
    return payload, [table], svg, anomalies


def _segmented_xy(trace):
    """Point coordinates with NaN separators at column gaps (for the SVG)."""
    xs: list[float] = []
    ys: list[float] = []
    segments = trace.meta["segments"]
    points = list(trace.points)
    for lo, hi in segments:
        seg = [p for p in points if lo <= p.rho <= hi]
        if xs:
            xs.append(float("nan"))
            ys.append(float("nan"))
        xs.extend(p.rho for p in seg)
        ys.extend(p.sigma for p in seg)
    return xs, ys


def _cmd_blueshift(cfg: RunConfig, args: dict):
    kind = LocusKind(args.get("kind") or "ss")
    ratio = args["ratio"]
    if kind is LocusKind.SS and ratio <= 0:
        raise UsageError("--kind ss requires --ratio > 0 (gain side)")
    if kind is LocusKind.CPA and ratio >= 0:
        raise UsageError("--kind cpa requires --ratio < 0 (loss side)")
    if args["d"] <= 0:
        raise UsageError("--d must be positive")
    if abs(args["n"]) > cfg.n_max:
        raise UsageError(f"|n| is capped at n_max = {cfg.n_max} (raise it in the config)")
    try:
        alphas = [float(s) for s in str(args["alphas"]).split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"--alphas expects a comma list of numbers: {exc}") from exc
    if not alphas:
        raise UsageError("--alphas is empty")
    rows = blue_shift_scan(ratio, args["n"], alphas, args["d"], cfg.units(), kind,
                           trace_tol=cfg.trace_tol, sigma_min=cfg.sigma_min,
                           steps=cfg.scan_steps)
    verdict = blue_shift_verdict(rows)
    table = Table(name="blueshift",
                  columns=["alpha", "rho", "sigma", "H", "E_ss", "V_r", "V_i",
                           "d_implied", "error"],
                  rows=[[r.alpha, r.rho, r.sigma, r.H, r.E_ss, r.v_r, r.v_i,
                         r.d_implied, r.error] for r in rows])
    anomalies = [{"code": "no-intersection", "alpha": r.alpha, "message": r.error}
                 for r in rows if r.error]
    ok = [r for r in rows if not r.error]
    curves = [svgplot.Curve("E_ss", [r.alpha for r in ok], [r.E_ss for r in ok])]
    svg = svgplot.render(curves, title=f"{kind.value.upper()} energy versus Levy index "
                                       f"(ratio={ratio}, n={args['n']})",
                         xlabel="alpha", ylabel="E")
    payload = {"kind": "blueshift_table", "verdict": verdict, "table": table.to_dict()}
    return payload, [table], svg, anomalies


def _cmd_survey(cfg: RunConfig, args: dict):
    try:
        cols, steps = (int(s) for s in str(args.get("grid") or "50x50").lower().split("x"))
    except ValueError as exc:
        raise UsageError(f"--grid expects COLSxSTEPS: {exc}") from exc
    if args["n_min"] > args["n_max"]:
        raise UsageError("--n-min must not exceed --n-max")
    if max(abs(args["n_min"]), abs(args["n_max"])) > cfg.n_max:
        raise UsageError(f"|n| is capped at n_max = {cfg.n_max} (raise it in the config)")
    grid = SurveyGrid(rho_cols=cols, sigma_steps=steps)
    anomalies: list = []
    rows = branch_survey(grid, args["alpha"], (args["n_min"], args["n_max"]),
                         trace_tol=cfg.trace_tol, root_tol=cfg.root_tol,
                         anomalies=anomalies)
    table = Table(name="survey",
                  columns=["kind", "n", "branch", "min_residual", "at_rho", "at_sigma",
                           "classification"],
                  rows=[[r.kind.value, r.n, r.branch.value, r.min_residual, r.at_rho,
                         r.at_sigma, r.classification] for r in rows])
    curves = []
    for kind in ("ss", "cpa"):
        for branch in ("minus", "plus"):
            pts = [r for r in rows if r.kind.value == kind and r.branch.value == branch]
            curves.append(svgplot.Curve(
                f"{kind} {branch}",
                [float(r.n) for r in pts],
                [float(np.log10(max(r.min_residual, 1e-300))) for r in pts]))
    svg = svgplot.render(curves, title=f"Branch admissibility survey (alpha={args['alpha']})",
                         xlabel="mode index n", ylabel="log10 min relative residual")
    payload = {"kind": "survey_table", "table": table.to_dict()}
    return payload, [table], svg, anomalies


_COMMANDS = {
    "scatter": _cmd_scatter,
    "trace": _cmd_trace,
    "blueshift": _cmd_blueshift,
    "survey": _cmd_survey,
}

_ARG_KEYS = {
    "scatter": ["vr", "vi", "d", "alpha", "emin", "emax", "points"],
    "trace": ["kind", "alphas", "ns", "rho_range", "resolution", "all_branches", "recipe"],
    "blueshift": ["ratio", "n", "alphas", "d", "kind"],
    "survey": ["alpha", "n_min", "n_max", "grid"],
}


def run_command(command: str, cfg: RunConfig, args: dict) -> tuple[ResultEnvelope, str]:
    """Execute a subcommand; returns the envelope and its SVG drawing text."""
    payload, _tables, svg, anomalies = _COMMANDS[command](cfg, args)
    units = cfg.units()
    config_echo = {
        "run": {**asdict(cfg), "formats": list(cfg.formats)},
        "units": {"mode": units.mode.value, "hbar": units.hbar, "mass": units.mass,
                  "u": units.u},
        "args": args,
    }
    env = ResultEnvelope(command=command, config=config_echo, payload=payload,
                         anomalies=anomalies, version=__version__,
                         timestamp=make_timestamp())
    return env, svg


def rerun(envelope: dict | str) -> ResultEnvelope:
    """Re-execute a run from its JSON envelope (path or parsed dict)."""
    env = read_envelope(envelope) if isinstance(envelope, str) else envelope
    run = dict(env["config"]["run"])
    run["formats"] = tuple(run.get("formats") or ("csv", "json", "svg"))
    cfg = RunConfig(**run)
    new_env, _svg = run_command(env["command"], cfg, dict(env["config"]["args"]))
    return new_env


def _write_outputs(env: ResultEnvelope, svg: str, cfg: RunConfig, base: str) -> list[str]:
    written = []
    os.makedirs(cfg.out_dir, exist_ok=True)
    if "json" in cfg.formats:
        path = os.path.join(cfg.out_dir, f"{base}.json")
        write_envelope_json(env, path)
        written.append(path)
    if "csv" in cfg.formats:
        table = env.payload.get("table")
        if table:
            path = os.path.join(cfg.out_dir, f"{base}.csv")
            write_table_csv(Table(base, table["columns"], table["rows"]), path)
            written.append(path)
    if "svg" in cfg.formats and svg:
        path = os.path.join(cfg.out_dir, f"{base}.svg")
        atomic_write_text(path, svg)
        written.append(path)
    return written


def main(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.command == "version":
            print(f"fracscatter {__version__}")
            return EXIT_OK
        cfg = build_config(ns)
        args = {key: getattr(ns, key, None) for key in _ARG_KEYS[ns.command]}
        env, svg = run_command(ns.command, cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracScatterError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    base = (args.get("recipe") or ns.command) if ns.command == "trace" else ns.command
    written = _write_outputs(env, svg, cfg, base)
    for path in written:
        print(path)
    if env.anomalies:
        print(f"{len(env.anomalies)} anomaly record(s); see the JSON envelope",
              file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
