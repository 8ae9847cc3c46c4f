"""Independent reference implementations used only by the test suite.

These deliberately avoid fracscatter's own code paths: the transfer matrix
below is produced by numerical wave matching (linear solves), and the
alpha = 2 locus residual is a standalone closed form.  Agreement between
these and the package is what the reduction/oracle tests assert.
"""

import cmath
import math

import numpy as np


def textbook_transfer_matrix(E: float, V: complex, d: float):
    """Rectangular-barrier transfer matrix for ordinary quantum mechanics.

    Natural units (hbar = 1, m = 1/2, so k = sqrt(E)); built by matching
    psi and psi' at x = -d and x = +d with 2x2 linear solves rather than any
    closed-form expression.  Valid for real or complex V.  Returns the 2x2
    numpy array M with [A+, B+] = M [A-, B-].
    """
    k = math.sqrt(E)
    kappa = cmath.sqrt(E - V)

    def basis(q: complex, x: float) -> np.ndarray:
        up, dn = cmath.exp(1j * q * x), cmath.exp(-1j * q * x)
        return np.array([[up, dn], [1j * q * up, -1j * q * dn]], dtype=complex)

    into_barrier = np.linalg.solve(basis(kappa, -d), basis(k, -d))
    out_of_barrier = np.linalg.solve(basis(k, d), basis(kappa, d))
    return out_of_barrier @ into_barrier


def qm2_mode_product(rho: float, sigma: float, n: int, plus_branch: bool) -> float:
    """The k*d value of the mode-n candidate, alpha = 2 closed form."""
    z = complex(1.0 - rho, -sigma)
    a1 = (1.0 - abs(z) ** 2) / abs(1.0 - z) ** 2
    a2 = 2.0 * z.imag / abs(1.0 - z) ** 2
    B = 1.0 - a1 * a1 - a2 * a2
    C = a2 * a2
    disc = math.sqrt(B * B + 4.0 * C)
    tau = 2.0 * C / (B + disc) if B > 0 else 0.5 * (disc - B)
    u = math.acos(max(-1.0, min(1.0, a1 / math.sqrt(1.0 + tau))))
    Q = math.pi * n + (u if plus_branch else -u)
    theta = math.atan2(sigma, 1.0 - rho)
    return Q / (2.0 * math.sqrt(abs(z)) * math.cos(0.5 * theta))


def qm2_residual(rho: float, sigma: float, n: int, plus_branch: bool,
                 absorption: bool = False) -> complex:
    """Standalone alpha = 2 locus residual (gain side, or absorption side)."""
    z = complex(1.0 - rho, -sigma)
    sz = cmath.sqrt(z)
    H = qm2_mode_product(rho, sigma, n, plus_branch)
    grow = cmath.exp(2j * H * sz)
    if absorption:
        return grow * (1.0 + sz) ** 2 - (1.0 - sz) ** 2 / grow
    return (1.0 + sz) ** 2 / grow - grow * (1.0 - sz) ** 2


def qm2_residual_scale(rho: float, sigma: float, n: int, plus_branch: bool) -> float:
    """Sum of the two term magnitudes of :func:`qm2_residual` (gain side)."""
    z = complex(1.0 - rho, -sigma)
    sz = cmath.sqrt(z)
    H = qm2_mode_product(rho, sigma, n, plus_branch)
    grow = cmath.exp(2j * H * sz)
    return abs((1.0 + sz) ** 2 / grow) + abs(grow * (1.0 - sz) ** 2)
