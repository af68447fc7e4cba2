from .config import settings, Settings
from .errors import (
    RotwaveError,
    InvalidArgumentError,
    AssertionFailure,
    ConfigError,
    NumericFailureError,
)

__all__ = [
    "settings",
    "Settings",
    "RotwaveError",
    "InvalidArgumentError",
    "AssertionFailure",
    "ConfigError",
    "NumericFailureError",
]
