"""Exception types shared across the package."""


class SpecRecipError(Exception):
    """Base class for all package errors."""


class PoleError(SpecRecipError, ValueError):
    """Raised when a meromorphic function is evaluated too close to a pole."""


class DomainError(SpecRecipError, ValueError):
    """Raised when an argument lies outside the supported domain."""


class NonConvergenceError(SpecRecipError, ArithmeticError):
    """Raised when a quadrature or series fails to meet its tolerance."""


class ParameterError(SpecRecipError, ValueError):
    """Raised when a parameter combination is invalid."""
