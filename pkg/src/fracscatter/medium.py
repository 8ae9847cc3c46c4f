"""Unit systems and the dispersion quantities of a space-fractional medium.

The free dispersion is E = D_alpha * (hbar * k)**alpha with Levy index
alpha in (1, 2] and generalized diffusion coefficient
D_alpha = u**(2-alpha) / (alpha * m**(alpha-1)), where u is a characteristic
velocity.  At alpha = 2 this reduces to the ordinary E = (hbar*k)**2 / (2m).
"""

from dataclasses import dataclass
from enum import Enum

from scipy import constants as _const

from .errors import DegenerateBarrierError, DomainValidationError
from .kernel import principal_power

#: Relative threshold below which E - V is treated as a degenerate barrier.
DEGENERACY_EPS = 1e-12

#: Characteristic velocity used by the physical-units preset, as a fraction of c.
PHYSICAL_U_FACTOR = 1.0e-5


class UnitMode(Enum):
    NATURAL = "natural"
    PHYSICAL = "physical"


@dataclass(frozen=True)
class UnitSystem:
    """Physical scale of the problem: hbar, particle mass and velocity u.

    Natural mode pins hbar = 1 and m = 1/2, making D_2 = 1 and k = sqrt(E)
    at alpha = 2.  Locus geometry in the (rho, sigma) plane never depends on
    the unit system; only reconstructed energies do.
    """

    hbar: float = 1.0
    mass: float = 0.5
    u: float = 1.0
    mode: UnitMode = UnitMode.NATURAL

    def __post_init__(self):
        if self.hbar <= 0 or self.mass <= 0 or self.u <= 0:
            raise DomainValidationError("hbar, mass and u must all be positive")
        if self.mode is UnitMode.NATURAL and (self.hbar != 1.0 or self.mass != 0.5):
            raise DomainValidationError("natural units require hbar = 1 and mass = 1/2")

    @classmethod
    def natural(cls, u: float = 1.0) -> "UnitSystem":
        return cls(hbar=1.0, mass=0.5, u=u, mode=UnitMode.NATURAL)

    @classmethod
    def physical(cls, u: float | None = None, mass: float | None = None) -> "UnitSystem":
        """SI preset: electron mass and u = 1e-5 c unless overridden."""
        return cls(hbar=_const.hbar,
                   mass=_const.m_e if mass is None else mass,
                   u=PHYSICAL_U_FACTOR * _const.c if u is None else u,
                   mode=UnitMode.PHYSICAL)


@dataclass(frozen=True)
class BarrierSpec:
    """Complex rectangular barrier V = v_r + i*v_i on the interval (-d, +d)."""

    v_r: float
    v_i: float
    d: float

    def __post_init__(self):
        if self.d <= 0:
            raise DomainValidationError("barrier half-width d must be positive")

    @property
    def v(self) -> complex:
        return complex(self.v_r, self.v_i)


def levy_index(alpha: float) -> float:
    """Validate a Levy index; the model covers 1 < alpha <= 2."""
    alpha = float(alpha)
    if not 1.0 < alpha <= 2.0:
        raise DomainValidationError(f"Levy index must satisfy 1 < alpha <= 2, got {alpha}")
    return alpha


def diffusion_coefficient(units: UnitSystem, alpha: float) -> float:
    """Generalized diffusion coefficient u**(2-alpha) / (alpha * m**(alpha-1)).

    The formula itself is evaluated for any alpha > 0; scattering-level
    operations restrict alpha to (1, 2] via :func:`levy_index`.
    """
    if alpha <= 0:
        raise DomainValidationError("diffusion coefficient requires alpha > 0")
    return units.u ** (2.0 - alpha) / (alpha * units.mass ** (alpha - 1.0))


def k_alpha(E: float, alpha: float, units: UnitSystem) -> float:
    """Free wave number (E / (D_alpha hbar**alpha))**(1/alpha) for E > 0."""
    if E <= 0:
        raise DomainValidationError(f"k_alpha requires E > 0, got {E}")
    alpha = levy_index(alpha)
    d_a = diffusion_coefficient(units, alpha)
    return (E / (d_a * units.hbar ** alpha)) ** (1.0 / alpha)


def kappa_alpha(E: float, V: complex, alpha: float, units: UnitSystem) -> complex:
    """Wave number inside the barrier, principal branch of ((E-V)/(D hbar^a))^(1/a).

    Coincides with :func:`k_alpha` at V = 0.  Raises
    :class:`DegenerateBarrierError` when |E - V| < 1e-12 * E rather than
    silently expanding around the degenerate point.
    """
    if E <= 0:
        raise DomainValidationError(f"kappa_alpha requires E > 0, got {E}")
    alpha = levy_index(alpha)
    V = complex(V)
    if abs(E - V) < DEGENERACY_EPS * E:
        raise DegenerateBarrierError(f"|E - V| < {DEGENERACY_EPS} * E at E={E}, V={V}")
    d_a = diffusion_coefficient(units, alpha)
    return principal_power((E - V) / (d_a * units.hbar ** alpha), 1.0 / alpha)


def eta_omega(k: float, kappa: complex, alpha: float) -> tuple[complex, complex, complex]:
    """Interface weight eta = (k/kappa)**(alpha-1) and omega_pm = ((eta^2 +- 1)/eta)/2.

    The identity omega_plus**2 - omega_minus**2 = 1 holds exactly and is the
    algebraic source of det M = 1 for the transfer matrix downstream.
    """
    if k <= 0:
        raise DomainValidationError("eta_omega requires k > 0")
    alpha = levy_index(alpha)
    if abs(kappa) < DEGENERACY_EPS * k:
        raise DegenerateBarrierError("kappa is degenerately small relative to k")
    eta = principal_power(k / kappa, alpha - 1.0)
    omega_plus = 0.5 * (eta * eta + 1.0) / eta
    omega_minus = 0.5 * (eta * eta - 1.0) / eta
    return eta, omega_plus, omega_minus


def energy_from_k(k: float, alpha: float, units: UnitSystem) -> float:
    """Inverse of :func:`k_alpha`: E = D_alpha * (hbar * k)**alpha."""
    if k <= 0:
        raise DomainValidationError("energy_from_k requires k > 0")
    alpha = levy_index(alpha)
    return diffusion_coefficient(units, alpha) * (units.hbar * k) ** alpha


NATURAL = UnitSystem.natural()
