"""Exception hierarchy shared across the package."""


class RelWLError(Exception):
    """Base class for all errors raised by relwl."""


class GraphFormatError(RelWLError):
    """Malformed or inconsistent graph input (bad line, self-loop, duplicate)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ContractViolation(RelWLError):
    """A documented precondition of an operation was not met."""


class CapExceeded(RelWLError):
    """Search or memory cap exceeded; the operation refuses instead of degrading.

    This is a refusal, not a failure: verification suites report it as an
    error (exit code 2), never as a falsified property.
    """
