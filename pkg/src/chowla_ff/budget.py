import os

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "CHOWLA_FF_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        return int(raw)
    return DEFAULT_BUDGET


def check_budget(projected: int, budget=None, what="enumeration") -> None:
    if budget is None:
        budget = default_budget()
    if projected > budget:
        raise BudgetExceeded(projected, budget, what)
