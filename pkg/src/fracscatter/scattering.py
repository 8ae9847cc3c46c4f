"""Transfer matrix of the complex rectangular barrier and derived coefficients."""

import cmath
from dataclasses import dataclass

from .errors import DomainValidationError, OverflowGuardError
from .medium import BarrierSpec, UnitSystem, eta_omega, k_alpha, kappa_alpha

#: exp(|x|) overflows double precision near 709; guard a bit earlier.
OVERFLOW_IM_LIMIT = 700.0

#: |M22| below this (relative to max(|M11|, 1)) flags a spectral singularity.
SS_SIGNAL_THRESHOLD = 1e-12


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex matrix relating plane-wave amplitudes on both sides."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Transmission/reflection amplitudes and coefficients for one energy.

    ``ss_flag`` marks a near-vanishing M22: T and R diverge there and are
    reported as inf.  Transmission is reciprocal, so a single t serves both
    incidence sides.
    """

    t: complex
    r_left: complex
    r_right: complex
    T: float
    R_left: float
    R_right: float
    ss_flag: bool = False


def transfer_matrix(E: float, barrier: BarrierSpec, alpha: float, units: UnitSystem) -> TransferMatrix:
    """Evaluate the four matrix elements at energy E.

    The complex trigonometric functions are assembled from exponentials so
    the overflow guard can refuse arguments with |Im(2 kappa d)| > 700
    instead of silently saturating.
    """
    k = k_alpha(E, alpha, units)
    kappa = kappa_alpha(E, barrier.v, alpha, units)
    _, omega_plus, omega_minus = eta_omega(k, kappa, alpha)

    x = 2.0 * kappa * barrier.d
    if abs(x.imag) > OVERFLOW_IM_LIMIT:
        raise OverflowGuardError(f"|Im(2 kappa d)| = {abs(x.imag):.3g} exceeds {OVERFLOW_IM_LIMIT}")
    e_plus = cmath.exp(1j * x)
    e_minus = cmath.exp(-1j * x)
    cos_x = 0.5 * (e_plus + e_minus)
    sin_x = -0.5j * (e_plus - e_minus)

    phase = cmath.exp(2j * k * barrier.d)
    return TransferMatrix(
        m11=(cos_x + 1j * omega_plus * sin_x) / phase,
        m12=1j * omega_minus * sin_x,
        m21=-1j * omega_minus * sin_x,
        m22=(cos_x - 1j * omega_plus * sin_x) * phase,
    )


def amplitudes(matrix: TransferMatrix) -> ScatteringAmplitudes:
    """Amplitudes t = 1/M22, r_left = -M21/M22, r_right = M12/M22.

    A spectral singularity is a signal, not a failure: when |M22| drops
    below SS_SIGNAL_THRESHOLD * max(|M11|, 1) the result is flagged and the
    divergent coefficients are returned as inf.
    """
    scale = max(abs(matrix.m11), 1.0)
    if abs(matrix.m22) < SS_SIGNAL_THRESHOLD * scale:
        inf = float("inf")
        return ScatteringAmplitudes(t=complex(inf, 0.0), r_left=complex(inf, 0.0),
                                    r_right=complex(inf, 0.0), T=inf, R_left=inf,
                                    R_right=inf, ss_flag=True)
    t = 1.0 / matrix.m22
    r_left = -matrix.m21 / matrix.m22
    r_right = matrix.m12 / matrix.m22
    return ScatteringAmplitudes(t=t, r_left=r_left, r_right=r_right,
                                T=abs(t) ** 2, R_left=abs(r_left) ** 2,
                                R_right=abs(r_right) ** 2)


@dataclass(frozen=True)
class CoefficientRow:
    """One row of a transmission/reflection scan; error text if the point failed."""

    E: float
    T: float | None
    R_left: float | None
    R_right: float | None
    ss_flag: bool = False
    error: str | None = None


def scan_coefficients(E_grid, barrier: BarrierSpec, alpha: float,
                      units: UnitSystem) -> list[CoefficientRow]:
    """Evaluate T and R on an ascending energy grid.

    Per-point failures (degenerate barrier, overflow guard) become row-level
    error markers; the scan itself never aborts.
    """
    grid = [float(e) for e in E_grid]
    if not grid:
        raise DomainValidationError("scan_coefficients requires a non-empty energy grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainValidationError("scan_coefficients requires a strictly ascending grid")
    rows: list[CoefficientRow] = []
    for E in grid:
        try:
            amp = amplitudes(transfer_matrix(E, barrier, alpha, units))
        except Exception as exc:  # noqa: BLE001 - row-level markers by contract
            rows.append(CoefficientRow(E=E, T=None, R_left=None, R_right=None,
                                       error=f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(CoefficientRow(E=E, T=amp.T, R_left=amp.R_left,
                                   R_right=amp.R_right, ss_flag=amp.ss_flag))
    return rows
