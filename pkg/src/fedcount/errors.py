"""Exception types shared across the package."""

from __future__ import annotations


class FedCountError(Exception):
    """Base class for all errors raised by fedcount."""


class InvalidGraphError(FedCountError, ValueError):
    pass


class GraphParseError(InvalidGraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidMaskError(FedCountError, ValueError):
    pass


class InvalidParameterError(FedCountError, ValueError):
    pass


class DegenerateInputError(FedCountError, ValueError):
    pass


class DomainError(FedCountError, ValueError):
    pass


class PreconditionError(FedCountError, ValueError):
    pass


class BudgetExceededError(FedCountError):
    """Raised when an exhaustive computation would exceed the work budget."""

    def __init__(self, projected: int, budget: int, what: str = "enumeration"):
        super().__init__(
            f"{what} needs {projected} elementary evaluations, budget is {budget}; "
            f"raise it with --budget or FEDCOUNT_BUDGET"
        )
        self.projected = projected
        self.budget = budget
