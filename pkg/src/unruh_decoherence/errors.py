"""Exception hierarchy shared by the library and the command line."""


class UnruhError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(UnruhError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ValidationError(UnruhError, ValueError):
    """Malformed or inconsistent input (unnormalized packet, bad matrix, bad config)."""


class IntegrationError(UnruhError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""


class SolverError(UnruhError, ArithmeticError):
    """A root solve found no admissible root or did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConsistencyError(UnruhError, AssertionError):
    """An internal invariant was violated; this indicates a bug, not bad input."""
