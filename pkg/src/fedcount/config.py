"""Work budget and worker-count defaults.

Both can be overridden per call or through the environment variables
``FEDCOUNT_BUDGET`` and ``FEDCOUNT_WORKERS``.
"""

from __future__ import annotations

import os

from .errors import BudgetExceededError, InvalidParameterError

DEFAULT_BUDGET = 2**32


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameterError(f"{name} must be an integer, got {raw!r}") from None


def resolve_budget(budget: int | None = None) -> int:
    if budget is None:
        env = _env_int("FEDCOUNT_BUDGET")
        budget = DEFAULT_BUDGET if env is None else env
    if budget <= 0:
        raise InvalidParameterError(f"budget must be positive, got {budget}")
    return budget


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        env = _env_int("FEDCOUNT_WORKERS")
        workers = 1 if env is None else env
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    return workers


def check_budget(projected: int, budget: int | None, what: str = "enumeration") -> int:
    """Raise if ``projected`` evaluations exceed the resolved budget; return the budget."""
    limit = resolve_budget(budget)
    if projected > limit:
        raise BudgetExceededError(projected, limit, what)
    return limit
