"""Exception hierarchy shared across the package."""


class SmdaggError(Exception):
    """Base class for all package errors."""


class DomainError(SmdaggError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(SmdaggError, ArithmeticError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message, **diagnostics):
        if diagnostics:
            details = ", ".join(f"{k}={v!r}" for k, v in diagnostics.items())
            message = f"{message} ({details})"
        super().__init__(message)
        self.diagnostics = diagnostics


class UnsupportedError(SmdaggError, ValueError):
    """The requested combination of proxy/loss/kind is not supported."""


class ParseError(SmdaggError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DataExhaustedError(SmdaggError, RuntimeError):
    """A finite sample stream ran out of observations."""


class UsageError(SmdaggError, RuntimeError):
    pass
