"""Errors raised by the spectral substrate and the dyadic decomposition."""

from typing import (
    Optional,
    Tuple,
)

from odhall.shared.exceptions.base import OdhallError


class SpectralError(OdhallError):
    """Base class for spectral-representation errors."""


class InvalidGridError(SpectralError):
    """Raised when grid parameters violate n even positive, L > 0."""

    def __init__(self, field: str, value: object, constraint: str):
        message = f"Invalid grid {field}={value!r}: {constraint}"
        super().__init__(message, details={"field": field, "value": repr(value)})


class DimensionMismatchError(SpectralError):
    """Raised when an array does not match the grid it is bound to."""

    def __init__(
        self,
        expected: Tuple[int, ...],
        actual: Tuple[int, ...],
        context: Optional[str] = None,
    ):
        message = f"Dimension mismatch: expected {expected}, got {actual}"
        if context:
            message += f" ({context})"
        super().__init__(
            message, details={"expected": list(expected), "actual": list(actual)}
        )


class MeanModeError(SpectralError):
    """Raised when a negative-order operator meets a nonzero mean."""

    def __init__(self, order: float, mean_modulus: float):
        message = (
            f"Lambda^{order} is undefined on a field with nonzero mean "
            f"(|f(0)| = {mean_modulus:.3e})"
        )
        super().__init__(
            message, details={"order": order, "mean_modulus": mean_modulus}
        )


class DyadicRangeError(SpectralError):
    """Raised when a dyadic block index is outside the filter bank."""

    def __init__(self, j: int, j_min: int, j_max: int):
        message = f"Dyadic block j={j} outside filter bank range [{j_min}, {j_max}]"
        super().__init__(message, details={"j": j, "j_min": j_min, "j_max": j_max})
