"""Exception hierarchy.

Engine errors abort a whole search. Java-level exceptions thrown by the
executed program (``ArrayIndexOutOfBoundsException`` and friends) are not
Python exceptions; they are search-tree leaves.
"""


class FreeArrayError(Exception):
    """Base class for all engine errors."""


class InvalidDomainError(FreeArrayError, ValueError):
    pass


class InvalidArgumentError(FreeArrayError, ValueError):
    pass


class InvariantViolation(FreeArrayError, RuntimeError):
    pass


class MissingBindingError(FreeArrayError, KeyError):
    pass


class BoundsError(FreeArrayError, IndexError):
    pass


class ForbiddenFreeIndexError(FreeArrayError):
    """A free index was used while the ``forbid`` strategy is active."""


class BudgetExceededError(FreeArrayError):
    pass


class PendingDelayedConstraintsError(FreeArrayError):
    """Search left the encapsulated region with unchecked delayed constraints."""


class ProgramFormatError(FreeArrayError):
    pass


class ParseError(FreeArrayError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" if line is not None else ""
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{where}: {message}" if where else message)


class JavaException(FreeArrayError):
    """A runtime exception raised by the executed program, e.g. ``NegativeArraySizeException``.

    The VM turns it into an exception leaf; it never escapes a search.
    """

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(kind)
