"""Closed-form locus kernels for spectral singularities and perfect absorption.

Everything here is a pure function of the dimensionless coordinates
(rho, sigma) = (V_r/E, V_i/E), the Levy index alpha, an integer mode index n
and a sign branch.  Writing z = (1 - rho) - i*sigma = r * exp(-i*theta), the
chain of quantities is

    Omega = z**(2(alpha-1)/alpha)
    a1 = (1 - |Omega|^2) / |1 - Omega|^2,   a2 = 2 Im(Omega) / |1 - Omega|^2
    tau = nonnegative root of  x^2 + (1 - a1^2 - a2^2) x - a2^2 = 0
    Q_n(+-) = pi*n +- arccos(a1 / sqrt(1 + tau))
    H_n(+-) = Q_n(+-) / (2 r**(1/alpha) cos(theta/alpha))      (= k_alpha * d)

A candidate (rho, sigma) hosts a gain-side singularity (sigma > 0) when the
scalar  asinh(sqrt(tau)) - Q_n * tan(theta/alpha)  vanishes and the complex
residual built from H_n confirms it; the absorption loci (sigma < 0) use the
sign-mirrored scalar and the residual with the exponentials swapped.

The a1/a2/tau forms below are written with expm1 so they stay accurate as
alpha -> 1, where the exponent 2(alpha-1)/alpha collapses and naive
evaluation of |1 - Omega|^2 loses all significant digits.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainValidationError, OverflowGuardError, SingularPointError
from .kernel import principal_power
from .medium import levy_index

#: Loci are never reported closer to the real axis than this.
SIGMA_MIN = 1e-4

#: Tolerated roundoff excursion of the arccos argument past +-1.
ARCCOS_CLAMP = 1e-12

#: |1 - Omega|^2 at or below this is treated as the singular point Omega = 1.
OMEGA_SINGULAR_TOL = 1e-14

#: Guard for the cos(theta/alpha) division in the H family.
COS_DIVISION_TOL = 1e-14

#: Real exponent magnitude beyond which the raw residual would overflow.
RESIDUAL_EXP_LIMIT = 700.0


class Branch(Enum):
    """Sign choice in the Q family: pi*n + arccos(...) or pi*n - arccos(...)."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class LocusKind(Enum):
    SS = "ss"
    CPA = "cpa"


@dataclass(frozen=True)
class LocusParams:
    """A point of the dimensionless parameter plane with its branch labels."""

    rho: float
    sigma: float
    alpha: float
    n: int
    branch: Branch

    def __post_init__(self):
        levy_index(self.alpha)
        if self.rho == 1.0 and self.sigma == 0.0:
            raise SingularPointError("locus kernels are singular at (rho, sigma) = (1, 0)")
        if self.rho == 0.0 and self.sigma == 0.0:
            raise SingularPointError("locus kernels are singular at (rho, sigma) = (0, 0)")


@dataclass(frozen=True)
class LocusKernel:
    """All intermediate kernel values at one parameter point (diagnostics)."""

    omega: complex
    p: float
    q: float
    tau: float
    Q: float
    H: float
    residual_s: complex
    residual_scalar: float


def _check_point(rho, sigma, alpha):
    levy_index(alpha)
    if rho == 1.0 and sigma == 0.0:
        raise SingularPointError("singular point (rho, sigma) = (1, 0)")


def _parts(rho, sigma, alpha):
    """Stable kernel ingredients; works elementwise on scalars or arrays.

    Returns (lnr, theta, a1, a2, tau) with nan entries wherever the point
    sits inside the Omega = 1 singular tolerance.
    """
    one_r = 1.0 - np.asarray(rho, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    lnr = 0.5 * np.log(one_r * one_r + sigma * sigma)
    theta = np.arctan2(sigma, one_r)
    c = 2.0 * (alpha - 1.0) / alpha

    growth = np.expm1(c * lnr)                   # |Omega| - 1
    scale = growth + 1.0                         # |Omega|
    half = np.sin(0.5 * c * theta)
    denom = growth * growth + 4.0 * scale * half * half   # |1 - Omega|^2
    with np.errstate(divide="ignore", invalid="ignore"):
        a1 = -np.expm1(2.0 * c * lnr) / denom
        a2 = -2.0 * scale * np.sin(c * theta) / denom
    bad = denom <= OMEGA_SINGULAR_TOL
    a1 = np.where(bad, np.nan, a1)
    a2 = np.where(bad, np.nan, a2)

    B = 1.0 - a1 * a1 - a2 * a2
    C = a2 * a2
    disc = np.sqrt(B * B + 4.0 * C)
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = np.where(B <= 0.0, 0.5 * (disc - B), 2.0 * C / (B + disc))
    return lnr, theta, a1, a2, tau


def _q_values(a1, tau, n, branch):
    arg = a1 / np.sqrt(1.0 + tau)
    over = np.abs(arg) > 1.0 + ARCCOS_CLAMP
    arg = np.clip(np.where(over, np.nan, arg), -1.0, 1.0)
    return math.pi * n + branch.sign * np.arccos(arg)


def _h_values(lnr, theta, alpha, q):
    cos_t = np.cos(theta / alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = q / (2.0 * np.exp(lnr / alpha) * cos_t)
    return np.where(np.abs(cos_t) < COS_DIVISION_TOL, np.nan, h)


def scalar_grid(rho, sigmas, alpha, n, branch, kind):
    """Vectorized locus scalar along a sigma grid at fixed rho (tracer path)."""
    lnr, theta, a1, a2, tau = _parts(rho, sigmas, alpha)
    q = _q_values(a1, tau, n, branch)
    p = np.arcsinh(np.sqrt(tau))
    if kind is LocusKind.CPA:
        p = -p
    return p - q * np.tan(theta / alpha)


def residual_rel_grid(rho, sigmas, alpha, n, branch, kind):
    """Vectorized relative complex residual along a sigma grid (survey path)."""
    lnr, theta, a1, a2, tau = _parts(rho, sigmas, alpha)
    q = _q_values(a1, tau, n, branch)
    h = _h_values(lnr, theta, alpha, q)

    half_c = (alpha - 1.0) / alpha
    zeta_re, zeta_im = _cexpm1(half_c * lnr, -half_c * theta)
    u = np.square(2.0 + zeta_re + 1j * zeta_im)
    v = np.square(zeta_re + 1j * zeta_im)

    root_mod = np.exp(lnr / alpha)
    w = 2j * h * root_mod * (np.cos(theta / alpha) - 1j * np.sin(theta / alpha))
    if kind is LocusKind.CPA:
        w = -w
    # scale out the growing exponential: |S| / (|t1| + |t2|) is invariant
    shrink = np.exp(-2.0 * np.where(np.real(w) >= 0.0, w, -w))
    grow_side = np.where(np.real(w) >= 0.0, v, u)
    small_side = np.where(np.real(w) >= 0.0, u, v) * shrink
    return np.abs(small_side - grow_side) / (np.abs(small_side) + np.abs(grow_side))


def _cexpm1(x, y):
    """Real and imaginary parts of exp(x + i*y) - 1, accurate near 0."""
    ex = np.expm1(x)
    half = np.sin(0.5 * np.asarray(y, dtype=float))
    return ex * np.cos(y) - 2.0 * half * half, (ex + 1.0) * np.sin(y)


# ---------------------------------------------------------------------------
# scalar operations
# ---------------------------------------------------------------------------

def omega(rho: float, sigma: float, alpha: float) -> complex:
    """Omega = z**(2(alpha-1)/alpha) on the principal branch, z = (1-rho) - i*sigma."""
    _check_point(rho, sigma, alpha)
    return principal_power(complex(1.0 - rho, -sigma), 2.0 * (alpha - 1.0) / alpha)


def tau(rho: float, sigma: float, alpha: float) -> float:
    """Nonnegative root of the sinh^2 quadratic; sinh(p)^2 on a locus candidate."""
    _check_point(rho, sigma, alpha)
    *_, t = _parts(rho, sigma, alpha)
    t = float(t)
    if math.isnan(t):
        raise SingularPointError(
            f"|1 - Omega|^2 <= {OMEGA_SINGULAR_TOL} at (rho, sigma) = ({rho}, {sigma})")
    return t


def p_and_q(rho: float, sigma: float, alpha: float, kd: float) -> tuple[float, float]:
    """The pair (p, q) = 2 kd r^(1/alpha) (sin, cos)(theta/alpha).

    q - i*p equals 2 kd z**(1/alpha), the argument of the barrier's complex
    trigonometric functions expressed through the dimensionless product kd.
    """
    _check_point(rho, sigma, alpha)
    if kd <= 0:
        raise DomainValidationError("p_and_q requires kd > 0")
    lnr, theta, *_ = _parts(rho, sigma, alpha)
    base = 2.0 * kd * math.exp(float(lnr) / alpha)
    return base * math.sin(float(theta) / alpha), base * math.cos(float(theta) / alpha)


def q_branch(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> float:
    """Q_n(+-) = pi*n +- arccos(a1 / sqrt(1 + tau)), the mode-n angular family."""
    _check_point(rho, sigma, alpha)
    lnr, theta, a1, a2, t = _parts(rho, sigma, alpha)
    arg = float(a1) / math.sqrt(1.0 + float(t))
    if abs(arg) > 1.0 + ARCCOS_CLAMP:
        raise DomainValidationError(
            f"arccos argument {arg} inconsistent with tau at ({rho}, {sigma})")
    arg = min(1.0, max(-1.0, arg))
    return math.pi * n + branch.sign * math.acos(arg)


def h_branch(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> float:
    """H_n(+-): the dimensionless product k_alpha * d of the mode-n candidate."""
    _check_point(rho, sigma, alpha)
    lnr, theta, *_ = _parts(rho, sigma, alpha)
    cos_t = math.cos(float(theta) / alpha)
    if abs(cos_t) < COS_DIVISION_TOL:
        raise DomainValidationError(f"cos(theta/alpha) vanishes at ({rho}, {sigma})")
    return q_branch(rho, sigma, alpha, n, branch) / (2.0 * math.exp(float(lnr) / alpha) * cos_t)


def ss_scalar(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> float:
    """Gain-side locus scalar asinh(sqrt(tau)) - Q_n * tan(theta/alpha).

    Zero exactly on the mode-(n, branch) singularity locus; strictly positive
    on the whole loss side sigma < 0.
    """
    t = tau(rho, sigma, alpha)
    q_val = q_branch(rho, sigma, alpha, n, branch)
    theta = math.atan2(sigma, 1.0 - rho)
    return math.asinh(math.sqrt(t)) - q_val * math.tan(theta / alpha)


def cpa_scalar(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> float:
    """Loss-side analogue of :func:`ss_scalar`.

    On the loss side the admissible root of the sinh^2 quadratic is the
    negative one, so the scalar is -asinh(sqrt(tau)) - Q_n * tan(theta/alpha).
    """
    t = tau(rho, sigma, alpha)
    q_val = q_branch(rho, sigma, alpha, n, branch)
    theta = math.atan2(sigma, 1.0 - rho)
    return -math.asinh(math.sqrt(t)) - q_val * math.tan(theta / alpha)


def _residual_raw(rho, sigma, alpha, n, branch, kind):
    h = h_branch(rho, sigma, alpha, n, branch)
    z = complex(1.0 - rho, -sigma)
    zeta = principal_power(z, (alpha - 1.0) / alpha)
    u = (1.0 + zeta) ** 2
    v = (1.0 - zeta) ** 2
    w = 2j * h * principal_power(z, 1.0 / alpha)
    if kind is LocusKind.CPA:
        w = -w
    if abs(w.real) > RESIDUAL_EXP_LIMIT:
        raise OverflowGuardError(f"residual exponent |Re w| = {abs(w.real):.3g} exceeds "
                                 f"{RESIDUAL_EXP_LIMIT}")
    return cmath.exp(-w) * u - cmath.exp(w) * v


def ss_residual(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> complex:
    """Complex residual of the singularity condition at the mode-n candidate.

    exp(-2i H z^(1/a)) (1 + z^((a-1)/a))^2 - exp(+2i H z^(1/a)) (1 - z^((a-1)/a))^2
    with H = H_n(+-); the zero set is exactly where the transfer-matrix element
    M22 vanishes for the reconstructed physical barrier.
    """
    return _residual_raw(rho, sigma, alpha, n, branch, LocusKind.SS)


def cpa_residual(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> complex:
    """Same structure as :func:`ss_residual` with the exponential signs swapped;
    its zero set is where M11 vanishes (perfect absorption)."""
    return _residual_raw(rho, sigma, alpha, n, branch, LocusKind.CPA)


def ss_residual_rel(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> float:
    """|ss_residual| scaled by the sum of its two term magnitudes (overflow-safe)."""
    _check_point(rho, sigma, alpha)
    return float(residual_rel_grid(rho, float(sigma), alpha, n, branch, LocusKind.SS))


def cpa_residual_rel(rho: float, sigma: float, alpha: float, n: int, branch: Branch) -> float:
    """Relative magnitude of :func:`cpa_residual` (overflow-safe)."""
    _check_point(rho, sigma, alpha)
    return float(residual_rel_grid(rho, float(sigma), alpha, n, branch, LocusKind.CPA))


def locus_kernel(params: LocusParams) -> LocusKernel:
    """Evaluate the whole kernel chain at one point, for diagnostics."""
    rho, sigma, alpha = params.rho, params.sigma, params.alpha
    t = tau(rho, sigma, alpha)
    q_val = q_branch(rho, sigma, alpha, params.n, params.branch)
    h_val = h_branch(rho, sigma, alpha, params.n, params.branch)
    p_val, q_geom = p_and_q(rho, sigma, alpha, h_val) if h_val > 0 else (math.nan, math.nan)
    return LocusKernel(
        omega=omega(rho, sigma, alpha),
        p=math.asinh(math.sqrt(t)),
        q=q_geom if h_val > 0 else q_val,
        tau=t,
        Q=q_val,
        H=h_val,
        residual_s=ss_residual(rho, sigma, alpha, params.n, params.branch),
        residual_scalar=ss_scalar(rho, sigma, alpha, params.n, params.branch),
    )
