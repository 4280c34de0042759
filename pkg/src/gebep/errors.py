"""Exception types shared across the package."""


class GebepError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(GebepError, ValueError):
    """A caller-supplied parameter is outside its documented domain."""


class ConsistencyError(GebepError, ArithmeticError):
    """An internal numeric consistency check failed.

    Raised when a quantity that must be a probability (or an ordered
    family of probabilities) violates its constraint by more than
    floating-point noise. Indicates a bug or an unsupported parameter
    regime, never bad user input.
    """
