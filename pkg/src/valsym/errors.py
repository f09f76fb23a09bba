"""Exceptions shared across the solver."""


class ModelError(ValueError):
    """A model is malformed: bad scope, bad domain, undeclared variable."""


class DimacsParseError(ValueError):
    """DIMACS graph text could not be parsed; message names the line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnsupportedModeError(ValueError):
    """The requested symmetry mode cannot run on this model's symmetries."""


class GroupTooLarge(RuntimeError):
    """Group closure exceeded the element cap.

    Callers should fall back to interchangeable-class handling or post
    generators only instead of enumerating the whole group.
    """

    def __init__(self, size: int, cap: int):
        super().__init__(f"group closure exceeded cap ({size} > {cap})")
        self.size = size
        self.cap = cap


class BudgetExceeded(RuntimeError):
    """Search or enumeration passed its node/assignment budget."""

    def __init__(self, budget: int, stats=None):
        super().__init__(f"enumeration budget exceeded ({budget})")
        self.budget = budget
        self.stats = stats
