"""
Exception hierarchy shared by every rotwave package.

Each class carries the process exit code the CLI reports for it.
"""
from typing import Optional


class RotwaveError(Exception):
    """Base class for toolkit errors"""

    exit_code = 1


class InvalidArgumentError(RotwaveError, ValueError):
    """An operation precondition does not hold"""

    exit_code = 1


class AssertionFailure(RotwaveError):
    """A property or identity check failed"""

    exit_code = 1


class ConfigError(RotwaveError):
    """Configuration could not be parsed or validated"""

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.field = field
        self.line = line


class NumericFailureError(RotwaveError, RuntimeError):
    """A solver diverged or a linear solve missed its tolerance"""

    exit_code = 3

    def __init__(self, message: str, time: Optional[float] = None, residual: Optional[float] = None):
        if time is not None:
            message = f"{message} (t={time:.6g})"
        if residual is not None:
            message = f"{message} (residual={residual:.3e})"
        super().__init__(message)
        self.time = time
        self.residual = residual
