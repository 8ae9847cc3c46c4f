"""Curve tracing of singularity/absorption loci and physical reconstruction.

Tracing strategy: per-column sigma scans.  At each rho the locus scalar is
sampled on a sigma grid, every sign change is refined with Brent's method and
each refined root must pass the relative complex-residual check before it is
reported.  Column scans are trivially restartable and deterministic; the
multi-valued behavior near vertical asymptotes simply yields several
validated roots in one column.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import locus
from .errors import (DomainValidationError, FracScatterError, NoIntersectionError,
                     OracleValidationError)
from .kernel import Bracket, bracket_scan, refine_root
from .locus import Branch, LocusKind, SIGMA_MIN
from .medium import UnitSystem, BarrierSpec, diffusion_coefficient, k_alpha
from .scattering import transfer_matrix

DEFAULT_RHO_RANGE = (-2.0, 0.995)
DEFAULT_SIGMA_MAX = 20.0
DEFAULT_STEPS = 2048
DEFAULT_RESOLUTION = 120
TRACE_TOL = 1e-8
ROOT_TOL = 1e-12
ORACLE_TOL = 1e-7
DEFAULT_N_MAX = 8


@dataclass(frozen=True)
class LocusPoint:
    """One validated point of a locus curve.

    ``alpha`` is carried so a point alone suffices for physical
    reconstruction; all points of one CurveTrace share it.
    """

    rho: float
    sigma: float
    alpha: float
    n: int
    branch: Branch
    kind: LocusKind
    H: float
    residual_rel: float


@dataclass
class CurveTrace:
    """Ordered locus points (ascending rho) plus full provenance metadata."""

    points: list[LocusPoint]
    meta: dict


@dataclass(frozen=True)
class PhysicalSSPoint:
    """Physical (E, V, d) realization of a locus point."""

    E: float
    v_r: float
    v_i: float
    d: float
    alpha: float
    n: int
    kind: LocusKind


@dataclass(frozen=True)
class BlueShiftRow:
    """One alpha row of a blue-shift scan; error text when the row failed."""

    alpha: float
    rho: float | None = None
    sigma: float | None = None
    H: float | None = None
    E_ss: float | None = None
    v_r: float | None = None
    v_i: float | None = None
    d_implied: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SurveyGrid:
    """Rectangular (rho, |sigma|) grid for the branch admissibility survey."""

    rho_min: float = -1.0
    rho_max: float = 0.95
    rho_cols: int = 50
    sigma_abs_min: float = 0.01
    sigma_abs_max: float = 2.0
    sigma_steps: int = 50

    def __post_init__(self):
        if not (self.rho_min < self.rho_max and self.sigma_abs_min < self.sigma_abs_max):
            raise DomainValidationError("survey grid ranges must be nonempty")
        if self.rho_cols < 2 or self.sigma_steps < 2:
            raise DomainValidationError("survey grid needs at least 2 points per axis")


@dataclass(frozen=True)
class SurveyRow:
    kind: LocusKind
    n: int
    branch: Branch
    min_residual: float
    at_rho: float
    at_sigma: float
    classification: str


def default_sigma_window(kind: LocusKind, sigma_max: float = DEFAULT_SIGMA_MAX,
                         sigma_min: float = SIGMA_MIN) -> tuple[float, float]:
    """Scan window on the side of the axis where this locus kind lives."""
    if kind is LocusKind.SS:
        return (sigma_min, sigma_max)
    return (-sigma_max, -sigma_min)


def solve_sigma_at_rho(rho: float, alpha: float, n: int, branch: Branch, kind: LocusKind,
                       sigma_window: tuple[float, float] | None = None,
                       steps: int = DEFAULT_STEPS, *,
                       trace_tol: float = TRACE_TOL, root_tol: float = ROOT_TOL,
                       sigma_min: float = SIGMA_MIN,
                       anomalies: list | None = None) -> list[LocusPoint]:
    """All validated locus crossings of the vertical line rho = const.

    Sign changes of the locus scalar are bracketed on the sigma grid and
    refined; a root is reported only if its relative complex residual is
    below ``trace_tol`` and its H value is positive.  Rejected roots are
    appended to ``anomalies`` when a list is supplied.
    """
    if steps < 16:
        raise DomainValidationError("solve_sigma_at_rho needs steps >= 16")
    lo, hi = sigma_window if sigma_window is not None else default_sigma_window(kind)
    if not lo < hi:
        raise DomainValidationError(f"empty sigma window ({lo}, {hi})")

    grid = np.linspace(lo, hi, steps)
    vals = np.asarray(locus.scalar_grid(rho, grid, alpha, n, branch, kind), dtype=float)
    vals[np.abs(grid) < sigma_min] = np.nan   # excluded strip around the real axis

    scalar = locus.ss_scalar if kind is LocusKind.SS else locus.cpa_scalar

    def f(s: float) -> float:
        return scalar(rho, s, alpha, n, branch)

    points: list[LocusPoint] = []
    finite = np.isfinite(vals)
    for i in range(steps - 1):
        if not (finite[i] and finite[i + 1]):
            continue
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            root = float(grid[i])
        elif a * b < 0.0:
            root = refine_root(f, Bracket(float(grid[i]), float(grid[i + 1]), float(a), float(b)),
                               tol=root_tol)
        else:
            continue
        point = _validate_root(rho, root, alpha, n, branch, kind,
                               trace_tol=trace_tol, sigma_min=sigma_min)
        if isinstance(point, LocusPoint):
            points.append(point)
        elif anomalies is not None:
            anomalies.append(point)
    points.sort(key=lambda p: p.sigma)
    return points


def _validate_root(rho, root, alpha, n, branch, kind, *, trace_tol, sigma_min):
    """Return a LocusPoint, or an anomaly dict describing the rejection."""
    if abs(root) < sigma_min:
        return {"code": "root-in-excluded-strip", "rho": rho, "sigma": root,
                "n": n, "branch": branch.value, "kind": kind.value}
    rel_fn = locus.ss_residual_rel if kind is LocusKind.SS else locus.cpa_residual_rel
    try:
        rel = rel_fn(rho, root, alpha, n, branch)
        h = locus.h_branch(rho, root, alpha, n, branch)
    except FracScatterError as exc:
        return {"code": "root-evaluation-failed", "rho": rho, "sigma": root,
                "n": n, "branch": branch.value, "kind": kind.value, "detail": str(exc)}
    if not math.isfinite(rel) or rel >= trace_tol:
        return {"code": "root-failed-residual", "rho": rho, "sigma": root,
                "residual_rel": rel, "n": n, "branch": branch.value, "kind": kind.value}
    if not (math.isfinite(h) and h > 0.0):
        return {"code": "root-nonphysical-H", "rho": rho, "sigma": root, "H": h,
                "n": n, "branch": branch.value, "kind": kind.value}
    return LocusPoint(rho=float(rho), sigma=float(root), alpha=float(alpha), n=n,
                      branch=branch, kind=kind, H=float(h), residual_rel=float(rel))


def trace_curve(alpha: float, n: int, branch: Branch = Branch.MINUS,
                kind: LocusKind = LocusKind.SS,
                rho_range: tuple[float, float] = DEFAULT_RHO_RANGE,
                resolution: int = DEFAULT_RESOLUTION,
                sigma_window: tuple[float, float] | None = None,
                steps: int = DEFAULT_STEPS, *,
                trace_tol: float = TRACE_TOL, root_tol: float = ROOT_TOL,
                sigma_min: float = SIGMA_MIN) -> CurveTrace:
    """Trace one locus curve over a rho grid.

    Each column keeps the root that continues the previous column's sigma
    (first column: the root nearest the axis); any further validated roots in
    the same column are preserved under ``meta["additional_roots"]``.
    Columns where the root escapes the window terminate a segment; segments
    and empty-column statistics land in ``meta``.
    """
    if not rho_range[0] < rho_range[1]:
        raise DomainValidationError("trace_curve requires rho_range with lo < hi")
    if resolution < 2:
        raise DomainValidationError("trace_curve requires resolution >= 2")
    window = sigma_window if sigma_window is not None else default_sigma_window(kind)

    columns = np.linspace(rho_range[0], rho_range[1], resolution)
    anomalies: list = []
    kept: list[LocusPoint] = []
    extra: list[dict] = []
    segments: list[list[float]] = []
    open_segment: list[float] | None = None
    prev_sigma: float | None = None
    empty = 0

    for rho in columns:
        roots = solve_sigma_at_rho(float(rho), alpha, n, branch, kind, window, steps,
                                   trace_tol=trace_tol, root_tol=root_tol,
                                   sigma_min=sigma_min, anomalies=anomalies)
        if not roots:
            empty += 1
            if open_segment is not None:
                segments.append(open_segment)
                open_segment = None
                prev_sigma = None
            continue
        if prev_sigma is None:
            pick = min(roots, key=lambda p: abs(p.sigma))
        else:
            pick = min(roots, key=lambda p: abs(p.sigma - prev_sigma))
        kept.append(pick)
        prev_sigma = pick.sigma
        for p in roots:
            if p is not pick:
                extra.append({"rho": p.rho, "sigma": p.sigma, "H": p.H,
                              "residual_rel": p.residual_rel})
        if open_segment is None:
            open_segment = [pick.rho, pick.rho]
        else:
            open_segment[1] = pick.rho
    if open_segment is not None:
        segments.append(open_segment)

    warnings = []
    if resolution and empty / resolution > 0.5:
        warnings.append({"code": "partial-trace",
                         "message": f"{empty}/{resolution} empty columns for "
                                    f"{kind.value} n={n} {branch.value} alpha={alpha}"})
    beyond_unity = int(np.sum(columns > 1.0))
    if beyond_unity:
        warnings.append({"code": "rho-beyond-unity",
                         "message": f"{beyond_unity} columns have rho > 1; principal-branch "
                                    "powers are used there"})

    meta = {
        "alpha": alpha, "n": n, "branch": branch.value, "kind": kind.value,
        "rho_range": [float(rho_range[0]), float(rho_range[1])],
        "resolution": resolution,
        "sigma_window": [float(window[0]), float(window[1])],
        "steps": steps,
        "trace_tol": trace_tol, "root_tol": root_tol, "sigma_min": sigma_min,
        "units": "dimensionless (rho, sigma); geometry independent of the unit system",
        "empty_columns": empty,
        "segments": segments,
        "additional_roots": extra,
        "anomalies": anomalies,
        "warnings": warnings,
    }
    return CurveTrace(points=kept, meta=meta)


def estimate_asymptote(alpha: float, n: int, branch: Branch = Branch.MINUS,
                       kind: LocusKind = LocusKind.SS,
                       rho_range: tuple[float, float] = DEFAULT_RHO_RANGE,
                       threshold: float = 100.0, *,
                       coarse_columns: int = 48, steps: int = DEFAULT_STEPS,
                       rho_tol: float = 1e-4) -> float:
    """Abscissa where the traced |sigma| first exceeds ``threshold``.

    The estimator scans a coarse rho grid, classifies each column as below
    the threshold or beyond it (either |sigma| > threshold or the root has
    escaped the window entirely) and bisects the boundary.  The returned rho
    approximates a vertical asymptote of the curve.
    """
    window = (SIGMA_MIN, 4.0 * threshold) if kind is LocusKind.SS else (-4.0 * threshold, -SIGMA_MIN)

    def column_state(rho: float) -> bool:
        """True when the column is beyond the threshold."""
        roots = solve_sigma_at_rho(rho, alpha, n, branch, kind, window, steps)
        if not roots:
            return True
        return max(abs(p.sigma) for p in roots) > threshold

    grid = np.linspace(rho_range[0], rho_range[1], coarse_columns)
    states = [column_state(float(r)) for r in grid]
    for i in range(coarse_columns - 1):
        if states[i] != states[i + 1]:
            lo, hi = float(grid[i]), float(grid[i + 1])
            lo_state = states[i]
            while hi - lo > rho_tol:
                mid = 0.5 * (lo + hi)
                if column_state(mid) == lo_state:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    raise NoIntersectionError(
        f"no sigma = {threshold} crossing for {kind.value} n={n} in rho range {rho_range}")


def ray_intersect(ratio: float, alpha: float, n: int, kind: LocusKind = LocusKind.SS,
                  branch: Branch = Branch.MINUS,
                  rho_range: tuple[float, float] | None = None, *,
                  coarse_columns: int = 48, steps: int = DEFAULT_STEPS,
                  trace_tol: float = TRACE_TOL, root_tol: float = 1e-13,
                  sigma_min: float = SIGMA_MIN) -> LocusPoint:
    """Intersection of the ray sigma = ratio * rho with a traced locus.

    The gain/loss ratio is V_i/V_r; it must be positive for the gain-side
    loci and negative for the absorption side.  Depends only on
    (ratio, alpha, n, kind): the locus geometry is dimensionless.
    """
    if kind is LocusKind.SS and ratio <= 0:
        raise DomainValidationError("gain-side loci require ratio = V_i/V_r > 0")
    if kind is LocusKind.CPA and ratio >= 0:
        raise DomainValidationError("absorption loci require ratio = V_i/V_r < 0")
    if rho_range is None:
        rho_range = (max(1.05 * sigma_min / abs(ratio), 0.01), DEFAULT_RHO_RANGE[1])

    def locus_sigma(rho: float) -> float:
        pts = solve_sigma_at_rho(rho, alpha, n, branch, kind, steps=steps,
                                 trace_tol=trace_tol, sigma_min=sigma_min)
        if not pts:
            return math.nan
        return min(pts, key=lambda p: abs(p.sigma - ratio * rho)).sigma

    def g(rho: float) -> float:
        return locus_sigma(rho) - ratio * rho

    brackets = bracket_scan(g, rho_range[0], rho_range[1], coarse_columns)
    if not brackets:
        raise NoIntersectionError(
            f"ray sigma = {ratio} * rho does not cross the {kind.value} locus n={n}, "
            f"alpha={alpha} for rho in [{rho_range[0]}, {rho_range[1]}]")
    rho_star = refine_root(g, brackets[0], tol=root_tol)
    pts = solve_sigma_at_rho(rho_star, alpha, n, branch, kind, steps=steps,
                             trace_tol=trace_tol, sigma_min=sigma_min)
    if not pts:
        raise NoIntersectionError(f"locus point vanished at refined rho = {rho_star}")
    return min(pts, key=lambda p: abs(p.sigma - ratio * rho_star))


def reconstruction_residual(E: float, v_r: float, v_i: float, d: float, alpha: float,
                            units: UnitSystem, kind: LocusKind) -> float:
    """Relative size of the matrix element that should vanish at (E, V, d)."""
    matrix = transfer_matrix(E, BarrierSpec(v_r=v_r, v_i=v_i, d=d), alpha, units)
    if kind is LocusKind.SS:
        return abs(matrix.m22) / (abs(matrix.m11) + 1.0)
    return abs(matrix.m11) / (abs(matrix.m22) + 1.0)


def to_physical(point: LocusPoint, d: float, units: UnitSystem) -> PhysicalSSPoint:
    """Reconstruct (E, V, d) from a locus point and verify it on the matrix.

    E = D_alpha hbar^alpha (H/d)^alpha makes k_alpha * d = H exactly; the
    reconstructed matrix must then have |M22| (gain side) or |M11|
    (absorption side) relatively below 1e-7, otherwise the point is
    inconsistent and an OracleValidationError is raised.
    """
    if d <= 0:
        raise DomainValidationError("to_physical requires d > 0")
    alpha = point.alpha
    energy = diffusion_coefficient(units, alpha) * units.hbar ** alpha * (point.H / d) ** alpha
    v_r, v_i = point.rho * energy, point.sigma * energy
    rel = reconstruction_residual(energy, v_r, v_i, d, alpha, units, point.kind)
    if not rel < ORACLE_TOL:
        raise OracleValidationError(
            f"reconstruction check failed: relative residual {rel:.3e} >= {ORACLE_TOL} at "
            f"(rho, sigma) = ({point.rho}, {point.sigma})")
    return PhysicalSSPoint(E=energy, v_r=v_r, v_i=v_i, d=d, alpha=alpha,
                           n=point.n, kind=point.kind)


def blue_shift_scan(ratio: float, n: int, alphas, d: float, units: UnitSystem,
                    kind: LocusKind = LocusKind.SS, branch: Branch = Branch.MINUS,
                    **solver_kwargs) -> list[BlueShiftRow]:
    """Energy of the ray-locus intersection as the Levy index is lowered.

    The first (largest-alpha) row is reconstructed with the given width d and
    anchors the potential strengths (V_r, V_i).  Every later row holds those
    potentials fixed, so its energy is E = V_r / rho*(alpha) and the width
    that realizes the intersection is implied: d = H / k_alpha(E).  Rows are
    sorted by descending alpha; failed rows carry an error marker.
    """
    ordered = sorted({float(a) for a in alphas}, reverse=True)
    if not ordered:
        raise DomainValidationError("blue_shift_scan requires at least one alpha")
    rows: list[BlueShiftRow] = []
    anchor: tuple[float, float] | None = None
    for alpha in ordered:
        try:
            point = ray_intersect(ratio, alpha, n, kind, branch, **solver_kwargs)
        except FracScatterError as exc:
            rows.append(BlueShiftRow(alpha=alpha, error=f"{type(exc).__name__}: {exc}"))
            continue
        if anchor is None:
            phys = to_physical(point, d, units)
            energy, d_implied = phys.E, d
            anchor = (phys.v_r, phys.v_i)
        else:
            energy = anchor[0] / point.rho
            d_implied = point.H / k_alpha(energy, alpha, units)
            rel = reconstruction_residual(energy, point.rho * energy, point.sigma * energy,
                                          d_implied, alpha, units, kind)
            if not rel < ORACLE_TOL:
                raise OracleValidationError(
                    f"blue-shift row alpha={alpha} failed reconstruction ({rel:.3e})")
        rows.append(BlueShiftRow(alpha=alpha, rho=point.rho, sigma=point.sigma,
                                 H=point.H, E_ss=energy, v_r=anchor[0], v_i=anchor[1],
                                 d_implied=d_implied))
    return rows


def blue_shift_verdict(rows: list[BlueShiftRow]) -> str:
    """PASS when E_ss strictly increases as alpha decreases; N/A for one row."""
    if any(r.error for r in rows):
        return "WITHHELD"
    if len(rows) < 2:
        return "N/A"
    energies = [r.E_ss for r in rows]
    return "PASS" if all(b > a for a, b in zip(energies, energies[1:])) else "FAIL"


def branch_survey(grid: SurveyGrid, alpha: float, n_range: tuple[int, int],
                  kinds=(LocusKind.SS, LocusKind.CPA),
                  branches=(Branch.MINUS, Branch.PLUS), *,
                  threshold: float = 1e-5, trace_tol: float = TRACE_TOL,
                  root_tol: float = ROOT_TOL,
                  anomalies: list | None = None) -> list[SurveyRow]:
    """Minimum relative residual per (kind, n, branch) over a bounded grid.

    A family is classified admits-zeros when the minimum (including refined
    scalar-crossing candidates) drops below ``threshold``.  Families outside
    the expected gain/loss pattern (plus branch or n <= 0) that still admit
    zeros are surfaced as anomalies instead of being suppressed.
    """
    n_lo, n_hi = n_range
    if n_lo > n_hi:
        raise DomainValidationError("branch_survey needs n_range with n_min <= n_max")
    if anomalies is not None and (grid.rho_cols < 16 or grid.sigma_steps < 16):
        anomalies.append({"code": "low-resolution",
                          "message": f"survey grid {grid.rho_cols}x{grid.sigma_steps} is coarse; "
                                     "minima are indicative only"})
    rho_grid = np.linspace(grid.rho_min, grid.rho_max, grid.rho_cols)
    rows: list[SurveyRow] = []
    for kind in kinds:
        if kind is LocusKind.SS:
            sig_grid = np.linspace(grid.sigma_abs_min, grid.sigma_abs_max, grid.sigma_steps)
            window = (grid.sigma_abs_min, grid.sigma_abs_max)
        else:
            sig_grid = np.linspace(-grid.sigma_abs_max, -grid.sigma_abs_min, grid.sigma_steps)
            window = (-grid.sigma_abs_max, -grid.sigma_abs_min)
        for n in range(n_lo, n_hi + 1):
            for branch in branches:
                best = math.inf
                best_at = (math.nan, math.nan)
                for rho in rho_grid:
                    rel = np.asarray(locus.residual_rel_grid(float(rho), sig_grid, alpha,
                                                             n, branch, kind), dtype=float)
                    finite = np.isfinite(rel)
                    if finite.any():
                        j = int(np.nanargmin(np.where(finite, rel, np.inf)))
                        if rel[j] < best:
                            best = float(rel[j])
                            best_at = (float(rho), float(sig_grid[j]))
                    for p in solve_sigma_at_rho(float(rho), alpha, n, branch, kind,
                                                window, grid.sigma_steps,
                                                trace_tol=math.inf, root_tol=root_tol,
                                                sigma_min=min(grid.sigma_abs_min, SIGMA_MIN)):
                        if p.residual_rel < best:
                            best = p.residual_rel
                            best_at = (p.rho, p.sigma)
                classification = "admits-zeros" if best < threshold else "excluded"
                if (classification == "admits-zeros"
                        and (branch is Branch.PLUS or n <= 0) and anomalies is not None):
                    anomalies.append({"code": "unexpected-admits",
                                      "kind": kind.value, "n": n, "branch": branch.value,
                                      "min_residual": best,
                                      "at": list(best_at)})
                rows.append(SurveyRow(kind=kind, n=n, branch=branch, min_residual=best,
                                      at_rho=best_at[0], at_sigma=best_at[1],
                                      classification=classification))
    return rows
