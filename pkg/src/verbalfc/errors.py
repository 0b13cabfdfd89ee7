"""Exception hierarchy shared by every module."""

from __future__ import annotations


class VerbalFCError(Exception):
    """Base class for all package errors."""


class ParentMismatchError(VerbalFCError, ValueError):
    """Elements from different groups were combined."""


class NotCentralError(VerbalFCError, ValueError):
    """A quotient was requested by a subgroup that is not central."""


class OrderCapExceeded(VerbalFCError):
    """A construction would exceed the configured order cap."""

    def __init__(self, order: int, cap: int, what: str = "group") -> None:
        super().__init__(f"{what} of order {order} exceeds the order cap {cap} (raise it with --max-order)")
        self.order = order
        self.cap = cap


class BudgetExceeded(VerbalFCError):
    """Exhaustive enumeration would exceed the tuple budget."""

    def __init__(self, needed: int, budget: int) -> None:
        super().__init__(
            f"enumeration needs about {needed} tuple evaluations, over the max-tuples budget of {budget}"
            " (raise --max-tuples or pass --sample N)"
        )
        self.needed = needed
        self.budget = budget


class WordSyntaxError(VerbalFCError, ValueError):
    """A word string does not match the grammar."""

    def __init__(self, message: str, text: str, position: int) -> None:
        self.message = message
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}\n  {text}\n  {' ' * position}^")


class GroupSpecError(VerbalFCError, ValueError):
    """A group spec string or file could not be understood."""


class MissingBindingError(VerbalFCError, KeyError):
    """An evaluation was requested without a value for some variable."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "missing binding"


class InexactValuesError(VerbalFCError, ValueError):
    """An operation that needs an exact value set got a sampled one."""


class PreconditionError(VerbalFCError, ValueError):
    """Inputs do not satisfy the hypotheses of a check."""
