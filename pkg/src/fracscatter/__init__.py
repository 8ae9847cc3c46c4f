"""Non-Hermitian scattering of a complex rectangular barrier in
space-fractional quantum mechanics.

The package computes the fractional transfer matrix of the barrier,
transmission/reflection coefficients, and the loci of spectral
singularities (lasing-threshold analogues, gain side) and coherent perfect
absorption (their time-reversed partners, loss side) in the dimensionless
(rho, sigma) = (V_r/E, V_i/E) plane, as functions of the Levy index alpha
and the mode index n.
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DegenerateBarrierError, DomainValidationError,
                     FracScatterError, NoIntersectionError, OracleValidationError,
                     OverflowGuardError, SingularPointError)
from .kernel import (Bracket, PolarForm, bracket_scan, polar_decompose,
                     principal_power, refine_root)
from .medium import (BarrierSpec, NATURAL, UnitMode, UnitSystem, diffusion_coefficient,
                     energy_from_k, eta_omega, k_alpha, kappa_alpha, levy_index)
from .scattering import (CoefficientRow, ScatteringAmplitudes, TransferMatrix,
                         amplitudes, scan_coefficients, transfer_matrix)
from .locus import (Branch, LocusKernel, LocusKind, LocusParams, cpa_residual,
                    cpa_residual_rel, cpa_scalar, h_branch, locus_kernel, omega,
                    p_and_q, q_branch, ss_residual, ss_residual_rel, ss_scalar, tau)
from .tracer import (BlueShiftRow, CurveTrace, LocusPoint, PhysicalSSPoint, SurveyGrid,
                     SurveyRow, blue_shift_scan, blue_shift_verdict, branch_survey,
                     estimate_asymptote, ray_intersect, solve_sigma_at_rho,
                     to_physical, trace_curve)

__all__ = [
    "__version__",
    # errors
    "FracScatterError", "DomainValidationError", "SingularPointError",
    "DegenerateBarrierError", "OverflowGuardError", "ConvergenceError",
    "NoIntersectionError", "OracleValidationError",
    # kernel
    "PolarForm", "Bracket", "principal_power", "polar_decompose", "bracket_scan",
    "refine_root",
    # medium
    "UnitMode", "UnitSystem", "NATURAL", "BarrierSpec", "levy_index",
    "diffusion_coefficient", "k_alpha", "kappa_alpha", "eta_omega", "energy_from_k",
    # scattering
    "TransferMatrix", "ScatteringAmplitudes", "CoefficientRow", "transfer_matrix",
    "amplitudes", "scan_coefficients",
    # locus
    "Branch", "LocusKind", "LocusParams", "LocusKernel", "omega", "tau", "p_and_q",
    "q_branch", "h_branch", "ss_scalar", "cpa_scalar", "ss_residual", "cpa_residual",
    "ss_residual_rel", "cpa_residual_rel", "locus_kernel",
    # tracer
    "LocusPoint", "CurveTrace", "PhysicalSSPoint", "BlueShiftRow", "SurveyGrid",
    "SurveyRow", "solve_sigma_at_rho", "trace_curve", "estimate_asymptote",
    "ray_intersect", "to_physical", "blue_shift_scan", "blue_shift_verdict",
    "branch_survey",
]
