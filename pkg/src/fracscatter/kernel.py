"""Branch-cut-safe complex powers and scalar root-finding primitives.

Every fractional power in this package goes through :func:`principal_power`,
which fixes the branch once and for all: arguments are taken in (-pi, pi].
The bracketing/refinement pair is the workhorse used by the locus tracer.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.optimize import brentq

from .errors import ConvergenceError, DomainValidationError, SingularPointError

#: Iteration cap for refine_root.
MAX_REFINE_ITERATIONS = 200

#: Default interval tolerance for refine_root.
DEFAULT_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class PolarForm:
    """Polar decomposition of 1 - rho - i*sigma.

    ``r`` is the modulus, ``theta`` the angle in (-pi, pi] such that
    ``1 - rho - i*sigma = r * exp(-i*theta)``.
    """

    r: float
    theta: float


@dataclass(frozen=True)
class Bracket:
    """A sign-change interval [lo, hi] with the function values at its ends."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainValidationError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0.0:
            raise DomainValidationError("bracket endpoints must have opposite (or zero) sign")


def principal_power(z: complex, a: float) -> complex:
    """Return z**a on the principal branch, Arg z in (-pi, pi].

    Continuous everywhere off the negative real axis.  z = 0 is only valid
    for positive exponents (0**a = 0).
    """
    z = complex(z)
    if z == 0:
        if a > 0:
            return 0j
        raise DomainValidationError(f"principal_power(0, {a}) is undefined for a <= 0")
    return cmath.exp(a * (math.log(abs(z)) + 1j * cmath.phase(z)))


def polar_decompose(rho: float, sigma: float) -> PolarForm:
    """Decompose 1 - rho - i*sigma into r * exp(-i*theta).

    theta = atan2(sigma, 1 - rho), so on the half-line sigma = 0, rho > 1
    the convention theta = pi is used (the limit from sigma -> 0+).
    """
    if rho == 1.0 and sigma == 0.0:
        raise SingularPointError("polar decomposition is singular at (rho, sigma) = (1, 0)")
    one_r = 1.0 - rho
    return PolarForm(r=math.hypot(one_r, sigma), theta=math.atan2(sigma, one_r))


def bracket_scan(f: Callable[[float], float], lo: float, hi: float, steps: int) -> list[Bracket]:
    """Sample f on an even grid and return every consecutive sign-change pair.

    Non-finite samples are skipped; an empty list means no sign change was
    seen at this resolution.
    """
    if not lo < hi:
        raise DomainValidationError(f"bracket_scan requires lo < hi, got [{lo}, {hi}]")
    if steps < 2:
        raise DomainValidationError("bracket_scan requires steps >= 2")
    out: list[Bracket] = []
    prev_x = prev_f = None
    for i in range(steps):
        x = lo + (hi - lo) * i / (steps - 1)
        fx = f(x)
        if not math.isfinite(fx):
            prev_x = prev_f = None
            continue
        if prev_f is not None and prev_f * fx <= 0.0 and (prev_f != 0.0 or fx != 0.0):
            out.append(Bracket(prev_x, x, prev_f, fx))
        prev_x, prev_f = x, fx
    return out


def refine_root(f: Callable[[float], float], bracket: Bracket, tol: float = DEFAULT_ROOT_TOL) -> float:
    """Refine a bracketed root with Brent's method.

    Returns a point inside [bracket.lo, bracket.hi].  Raises
    :class:`ConvergenceError` if the iteration cap is hit.
    """
    if tol <= 0:
        raise DomainValidationError("refine_root tolerance must be positive")
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    try:
        root, info = brentq(f, bracket.lo, bracket.hi, xtol=tol,
                            maxiter=MAX_REFINE_ITERATIONS, full_output=True, disp=False)
    except ValueError as exc:
        raise DomainValidationError(f"invalid bracket for refinement: {exc}") from exc
    if not info.converged:
        raise ConvergenceError(
            f"root refinement did not converge in {MAX_REFINE_ITERATIONS} iterations "
            f"on [{bracket.lo}, {bracket.hi}]")
    return min(max(root, bracket.lo), bracket.hi)


def scan_and_refine(f: Callable[[float], float], lo: float, hi: float, steps: int,
                    tol: float = DEFAULT_ROOT_TOL) -> list[float]:
    """Convenience composition of bracket_scan and refine_root."""
    return [refine_root(f, b, tol) for b in bracket_scan(f, lo, hi, steps)]
