"""Exception and warning types shared across the package.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto distinct process exit statuses without inspecting messages.
"""


class MFError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class UsageError(MFError, ValueError):
    """Malformed command-line input."""

    exit_code = 2


class DomainError(MFError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 3


class SingularityError(DomainError):
    """Evaluation requested at a point where a coefficient diverges."""


class NonNormalizableError(DomainError):
    """The requested state has a divergent norm (the l = 0 family)."""


class StencilError(DomainError):
    """A finite-difference stencil would reach outside the sampled grid."""


class AccuracyError(MFError, ArithmeticError):
    """A numerical procedure could not reach its requested accuracy."""

    exit_code = 4


class SearchError(MFError, RuntimeError):
    """A root or eigenvalue search could not bracket a solution."""

    exit_code = 5

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class WrongBranchError(SearchError):
    """A root was found, but on a branch with the wrong node count."""


class NotFoundError(SearchError):
    """No root exists inside the scanned window."""


class VerificationError(MFError):
    """A verification suite found residuals above threshold."""

    exit_code = 6


class OutputError(MFError, OSError):
    """An output file could not be written."""

    exit_code = 7


class ExtrapolationWarning(UserWarning):
    """Evaluation outside the natural interval of a function."""


class OutsideLensWarning(UserWarning):
    """A physical radius beyond the lens rim was evaluated."""


class AccuracyWarning(UserWarning):
    """A result was produced, but its accuracy may be degraded."""
