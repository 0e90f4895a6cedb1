"""Base class shared by every error the tool raises."""

from typing import (
    Any,
    Dict,
    Optional,
)


class OdhallError(Exception):
    """Base class for odhall errors.

    Carries a human-readable message, a details dict for structured logs and
    the process exit code the command line maps the error to.
    """

    def __init__(
        self,
        message: str = "odhall error",
        exit_code: int = 1,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        return self.message

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for structured logging."""
        result = {
            "error": self.__class__.__name__,
            "message": self.message,
            "exit_code": self.exit_code,
        }
        if self.details:
            result["details"] = self.details
        return result
