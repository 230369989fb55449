"""Exception types shared across the package."""


class DmojcError(ValueError):
    """Base class for all package errors."""


class DomainError(DmojcError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(DmojcError):
    """An operation was called with an incompatible model or state."""


class ValidationError(DmojcError):
    """Input matrix fails a structural check (Hermiticity, positivity, trace)."""


class DegenerateInputError(DmojcError):
    """The requested object is undefined at the given parameters."""
