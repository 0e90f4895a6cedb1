"""Persistence errors (snapshots, time series, output directories)."""

from pathlib import Path
from typing import (
    Optional,
    Union,
)

from odhall.shared.constants.io import EXIT_IO
from odhall.shared.exceptions.base import OdhallError


class StorageError(OdhallError):
    """Base class for file-format and file-system errors."""

    def __init__(self, message: str, path: Optional[Union[str, Path]] = None):
        details = {"path": str(path)} if path is not None else None
        if path is not None:
            message = f"{message} [{path}]"
        super().__init__(message, exit_code=EXIT_IO, details=details)


class SnapshotFormatError(StorageError):
    """Raised when a snapshot header is malformed (magic, tag, sizes)."""


class SnapshotVersionError(StorageError):
    """Raised when a snapshot was written by an unsupported format version."""

    def __init__(self, version: int, supported: int, path=None):
        super().__init__(
            f"Unsupported snapshot format version {version} (supported: {supported})",
            path,
        )


class TruncatedPayloadError(StorageError):
    """Raised when a snapshot payload is shorter or longer than its header says."""

    def __init__(self, expected: int, actual: int, path=None):
        super().__init__(
            f"Snapshot payload length {actual} bytes, expected {expected}", path
        )


class SeriesFormatError(StorageError):
    """Raised when a time-series CSV does not follow the frozen schema."""


class OutputWriteError(StorageError):
    """Raised when writing run output fails."""
