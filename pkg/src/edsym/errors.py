"""Shared error types for the engine."""


class DomainError(ValueError):
    """Raised for mathematically invalid input: zero denominators,
    unknown variables or catalog names, singular base changes."""


class ChartMismatchError(DomainError):
    """Raised when values attached to different charts are mixed."""


class LimitError(RuntimeError):
    """Raised when a computation exceeds the configured jet-order or
    coefficient-degree bound."""
