"""Exception types shared across the package."""

from __future__ import annotations


class InvalidArgument(ValueError):
    """An argument violates an operation's precondition."""


class InvalidCircuit(ValueError):
    """A circuit matrix does not describe a serial flag circuit."""


class OrderingViolation(ValueError):
    """Unfolding would pass through the zero column between two nonzero columns."""


class UndecodableSubpattern(RuntimeError):
    """The classical decoder found no error of weight <= t for a flag subpattern."""


class ResourceLimit(RuntimeError):
    """An exhaustive computation would exceed its configured budget."""

    def __init__(self, message: str, required: int, budget: int) -> None:
        super().__init__(message)
        self.required = required
        self.budget = budget
