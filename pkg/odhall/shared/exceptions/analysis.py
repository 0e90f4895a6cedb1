"""Errors raised by the decay-fit harness."""

from odhall.shared.exceptions.base import OdhallError


class AnalysisError(OdhallError):
    """Base class for time-series analysis errors."""


class LogDomainError(AnalysisError):
    """Raised when a fit window contains a nonpositive value."""

    def __init__(self, t: float, value: float):
        super().__init__(
            f"Cannot take log of value {value!r} at t = {t:.6g}",
            details={"t": t, "value": value},
        )


class FitWindowError(AnalysisError):
    """Raised when a fit window holds too few samples or lies outside the series."""

    def __init__(self, t0: float, t1: float, samples: int, required: int):
        super().__init__(
            f"Fit window [{t0:.6g}, {t1:.6g}] holds {samples} samples, need at least {required}",
            details={"t0": t0, "t1": t1, "samples": samples, "required": required},
        )
