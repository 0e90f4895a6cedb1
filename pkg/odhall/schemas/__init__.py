"""Pydantic schemas for run configuration and diagnostics records."""

from .records import (
    FitResult,
    RateCheck,
    TimeSeriesRecord,
)
from .run_config import (
    FitConfig,
    GridConfig,
    IcConfig,
    OutputConfig,
    ParamsConfig,
    RunConfig,
    RunSection,
    TimeConfig,
    config_defaults,
)

__all__ = [
    "FitConfig",
    "FitResult",
    "GridConfig",
    "IcConfig",
    "OutputConfig",
    "ParamsConfig",
    "RateCheck",
    "RunConfig",
    "RunSection",
    "TimeConfig",
    "TimeSeriesRecord",
    "config_defaults",
]
