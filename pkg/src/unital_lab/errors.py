"""Exception types shared across the package."""


class UnitalLabError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(UnitalLabError, ValueError):
    pass


class NonHermitian(UnitalLabError, ValueError):
    pass


class NoConvergence(UnitalLabError, ArithmeticError):
    pass


class InvalidDensityMatrix(UnitalLabError, ValueError):
    pass


class NotUnitary(UnitalLabError, ValueError):
    pass


class ConstraintViolation(UnitalLabError, ValueError):
    """Raised when an energy block fails the grand-unitarity constraints."""

    def __init__(self, message, max_violation=float("nan")):
        super().__init__(message)
        self.max_violation = max_violation


class NotCompletable(UnitalLabError, ValueError):
    """No symmetric unitary scattering matrix has the requested transmissions."""


class SingularBound(RuntimeWarning):
    """Emitted when the entropy-gain lower bound diverges to minus infinity."""


class NotTracePreserving(UnitalLabError, ValueError):
    pass
