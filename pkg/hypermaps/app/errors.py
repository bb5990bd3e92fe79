"""Exceptions raised by the services; each carries the CLI exit code it maps to."""


class ChiralityError(Exception):
    exit_code = 1


class UsageError(ChiralityError, ValueError):
    """Invalid family, parameters or a violated precondition."""
    exit_code = 2


class CapExceededError(ChiralityError):
    """An enumeration would exceed a configured cap."""
    exit_code = 3

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class FieldError(ChiralityError, ArithmeticError):
    pass


class SingularMatrixError(ChiralityError, ArithmeticError):
    pass


class DefectError(ChiralityError):
    """A computed fact contradicts a proven invariant."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ClaimFailure(ChiralityError):
    def __init__(self, failed: list[str]):
        super().__init__(f"{len(failed)} claim(s) failed: {', '.join(failed)}")
        self.failed = failed
