"""
Error taxonomy shared by the library and the command line.
Each error class carries the process exit code the CLI reports for it.
"""


class TaulabError(Exception):
    """Base class; unexpected failures map to the internal-breach exit code."""

    exit_code = 4


class InputValidationError(TaulabError, ValueError):
    """Raised when a document, flag or constructor argument fails validation."""

    exit_code = 2


class DomainError(InputValidationError):
    """Raised when an argument lies outside the domain of an operation."""

    pass


class EnclosureError(TaulabError, ArithmeticError):
    """Raised when a rigorous bracket cannot be established (e.g. truncation too small)."""

    exit_code = 3


class InvariantBreach(TaulabError):
    """Raised when a verified invariant fails at runtime."""

    exit_code = 4


class UndecidedError(TaulabError):
    """
    Raised when a threshold lies inside a bracket, so the comparison is not certified.
    Retryable: a larger truncation may decide it.
    """

    def __init__(self, message: str, *, threshold: float, lo: float, hi: float):
        super().__init__(message)
        self.threshold = threshold
        self.lo = lo
        self.hi = hi
