"""Configuration and usage errors."""

from typing import (
    Any,
    Optional,
)

from odhall.shared.constants.io import EXIT_USAGE
from odhall.shared.exceptions.base import OdhallError


class ConfigurationError(OdhallError):
    """Raised when a run configuration is missing a key or violates a constraint."""

    def __init__(self, key: str, constraint: str, value: Optional[Any] = None):
        self.key = key
        self.constraint = constraint
        message = f"Configuration error for '{key}': {constraint}"
        details = {"key": key, "constraint": constraint}
        if value is not None:
            details["value"] = repr(value)
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class CoercivityError(ConfigurationError):
    """Raised when eta exceeds the threshold that keeps E_sigma coercive."""

    def __init__(self, eta: float, eta_max: float):
        self.eta_max = eta_max
        super().__init__(
            "params.eta",
            f"must not exceed the coercivity threshold {eta_max:.6g}",
            eta,
        )


class UsageError(OdhallError):
    """Raised for malformed command lines."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=EXIT_USAGE)
