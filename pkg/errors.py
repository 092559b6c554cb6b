"""
Error types shared by the geograph modules.

The CLI maps these onto exit codes: BudgetExhausted exits with 2, while
InvariantViolation and every other failure exit with 1.
"""


class GeographError(Exception):
    """Base class for all geograph errors."""


class BudgetExhausted(GeographError):
    """A bounded search ran out of candidates before finding what it needed."""

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message)
        self.context = context or {}


class InvariantViolation(GeographError):
    """A property that must always hold was observed to fail."""

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message)
        self.context = context or {}


class GuideViolation(InvariantViolation):
    """A guided run cannot keep the guided conditions: the guide image left the allowed box."""


class BoundaryIndecision(GeographError):
    """An L2 floor sits exactly on an integer boundary, or refinement hit its cap."""


class DimensionMismatch(GeographError, ValueError):
    """Points of different dimensions were combined."""


class MalformedRequest(GeographError, ValueError):
    """Input violates the preconditions of an operation."""
