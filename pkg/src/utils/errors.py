"""
Exceptions raised by the library.

The CLI maps them to exit codes: BudgetExceededError -> 2, DomainError -> 3.
"""

from typing import Optional


class TSNError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TSNError, ValueError):
    """Input outside the domain of an operation (bad vertex, placement, field, point)."""


class InvalidPlacementError(DomainError):
    """A receiver set was built from a placement that is not valid."""

    def __init__(self, placement: str, reason: str = ""):
        self.placement = placement
        message = f"Invalid receiver placement {{{placement}}}"
        if reason:
            message += f": {reason}"
        super().__init__(message)


class BudgetExceededError(TSNError):
    """A computation would exceed its configured budget."""

    def __init__(self, what: str, requested: int, allowed: int, hint: Optional[str] = None):
        self.what = what
        self.requested = requested
        self.allowed = allowed
        message = f"{what}: {requested} exceeds budget {allowed}"
        if hint:
            message += f" ({hint})"
        super().__init__(message)
