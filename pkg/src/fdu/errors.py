"""Exception hierarchy shared by all modules."""


class FduError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(FduError, ValueError):
    """An input violates a documented constraint (message names the constraint)."""


class SeriesTruncationError(FduError, ArithmeticError):
    """An image sum hit its term budget before meeting its tolerance.

    Carries the partial result so callers can inspect how far the sum got.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class OracleConvergenceError(FduError, ArithmeticError):
    """The quadrature oracle failed to converge; message carries diagnostics."""


class InternalError(FduError):
    """A condition the contracts rule out for valid inputs occurred anyway."""
