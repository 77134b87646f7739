"""Exception types shared across eulerweft modules."""

from __future__ import annotations


class EulerweftError(Exception):
    """Base class for all library errors."""


class CapExceeded(EulerweftError):
    """An exponential-cost scan would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} = {size} exceeds cap {cap}; pass an explicit override to proceed")
        self.what = what
        self.size = size
        self.cap = cap


class BudgetExhausted(EulerweftError):
    """A bounded search ran out of trials without a hit."""


class LengthMismatch(EulerweftError, ValueError):
    pass


class DimensionMismatch(EulerweftError, ValueError):
    pass


class InvalidCircuit(EulerweftError, ValueError):
    pass


class InvalidChoice(EulerweftError, ValueError):
    pass


class NonUniformCoupling(EulerweftError, ValueError):
    pass


class NonPositiveLambda(EulerweftError, ValueError):
    pass


class InvalidTolerance(EulerweftError, ValueError):
    pass


class FormatError(EulerweftError, ValueError):
    """Malformed input text (matrix, graph, or instance file)."""
