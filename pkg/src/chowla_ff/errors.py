"""Exception hierarchy shared by every module."""


class ChowlaError(Exception):
    """Base class for all library errors."""


class NotPrime(ChowlaError, ValueError):
    pass


class EvenCharacteristic(ChowlaError, ValueError):
    pass


class BoundExceeded(ChowlaError, ValueError):
    pass


class DivisionByZero(ChowlaError, ZeroDivisionError):
    pass


class FieldMismatch(ChowlaError, TypeError):
    pass


class DuplicateNode(ChowlaError, ValueError):
    pass


class ZeroPolynomial(ChowlaError, ValueError):
    pass


class ConstantPolynomial(ChowlaError, ValueError):
    pass


class InvalidSpec(ChowlaError, ValueError):
    pass


class BudgetExceeded(ChowlaError):
    """Raised before any work starts when the projected enumeration is too large."""

    def __init__(self, projected, budget, what="enumeration"):
        self.projected = projected
        self.budget = budget
        super().__init__(f"{what} needs {projected} summands, budget is {budget}")


class ConsistencyFailure(ChowlaError):
    """Two independent routes disagreed; carries the first counterexample."""

    def __init__(self, message, counterexample=None):
        self.counterexample = counterexample
        super().__init__(message)
