"""Custom exceptions for odhall.

This module defines the exception hierarchy used across the package. Every
class derives from ``OdhallError`` and carries the exit code the command
line reports for it.
"""

from .analysis import *
from .base import *
from .io import *
from .physics import *
from .spectral import *
from .validation import *

__all__ = [
    "OdhallError",
    # Spectral exceptions
    "SpectralError",
    "InvalidGridError",
    "DimensionMismatchError",
    "MeanModeError",
    "DyadicRangeError",
    # Physics exceptions
    "PhysicsError",
    "VacuumProximityError",
    "BlowUpError",
    "AmplitudeTooLargeError",
    "SmallnessBudgetError",
    # Validation exceptions
    "ConfigurationError",
    "CoercivityError",
    "UsageError",
    # Storage exceptions
    "StorageError",
    "SnapshotFormatError",
    "SnapshotVersionError",
    "TruncatedPayloadError",
    "SeriesFormatError",
    "OutputWriteError",
    # Analysis exceptions
    "AnalysisError",
    "LogDomainError",
    "FitWindowError",
]
