"""Exception hierarchy shared by all fracscatter modules."""


class FracScatterError(Exception):
    """Base class for all errors raised by this package."""


class DomainValidationError(FracScatterError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularPointError(DomainValidationError):
    """Evaluation was requested exactly at a removable-singularity point."""


class DegenerateBarrierError(DomainValidationError):
    """The barrier is degenerate: E is too close to V for a stable root."""


class OverflowGuardError(FracScatterError):
    """A complex exponential would overflow double precision."""


class ConvergenceError(FracScatterError):
    """A root refinement did not converge within its iteration cap."""


class NoIntersectionError(FracScatterError):
    """A ray does not intersect the traced locus in the searched range."""


class OracleValidationError(FracScatterError):
    """A reconstructed physical point failed its transfer-matrix check."""
