"""Exception hierarchy.

Domain errors (bad inputs, parameters outside a model's validity range) are
separated from invariant breaches (internal structure failed a hard check);
the CLI maps the former to exit code 2 and the latter to exit code 3.
"""


class QcatError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QcatError, ValueError):
    """Input outside the domain where an operation is defined."""


class NotPositiveDefinite(DomainError):
    """A metric candidate has an eigenvalue at or below tolerance."""


class MissingBounds(DomainError):
    """Layer bounds (mu, nu) are unknown for the requested dimension."""


class DivisionResidue(QcatError, ArithmeticError):
    """A homogeneous polynomial is not divisible by uv within tolerance."""


class ResidualR(QcatError, ArithmeticError):
    """The r-odd part of a (u, v) polynomial failed to cancel."""


class ConvergenceFailure(QcatError, RuntimeError):
    """Iterative eigensolver ran out of its sweep budget."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class InvariantBreach(QcatError, RuntimeError):
    """A structural invariant failed; this is a bug, not a bad input."""


class ConsistencyFailure(InvariantBreach):
    pass


class PatternFailure(InvariantBreach):
    pass


class DimensionFailure(InvariantBreach):
    pass
