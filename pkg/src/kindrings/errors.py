"""Exception types shared across the package."""

from __future__ import annotations


class KindringsError(Exception):
    pass


class UsageError(KindringsError, ValueError):
    """Bad input to an operation (ring mismatch, failed precondition, ...)."""


class RingParseError(UsageError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class BudgetExceededError(KindringsError):
    """A bounded search would examine more candidates than allowed."""

    def __init__(self, what: str, needed: int, budget: int):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"{what}: {needed} candidates exceed the budget of {budget}"
        )


class GroupoidValidationError(UsageError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            lines += f"; ... ({more} more)"
        super().__init__(f"invalid groupoid: {lines}")


class StarHomomorphismError(UsageError):
    def __init__(self, message: str, pair: tuple = ()):
        self.pair = pair
        super().__init__(message)
