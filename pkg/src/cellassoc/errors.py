"""Exception and warning types shared across the toolkit.

Exit-code mapping used by the CLI: ValidationError -> 2,
SizeLimitError / BudgetExceededError -> 3, InternalCheckError -> 4.
"""


class CellAssocError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(CellAssocError, ValueError):
    """Malformed or out-of-contract input (bad index, bad JSON, bad flag)."""


class EmptyCellError(ValidationError):
    """An active user has an empty association set where one is required."""


class SizeLimitError(CellAssocError, RuntimeError):
    """Instance too large for the requested exact evaluation mode."""


class BudgetExceededError(SizeLimitError):
    """Enumeration would exceed the configured candidate cap."""


class InternalCheckError(CellAssocError, RuntimeError):
    """A solver-produced certificate failed independent re-verification."""


class GenericityWarning(UserWarning):
    """Independent channel seeds disagreed on a feasibility decision."""
