"""Errors raised while evaluating or advancing the model equations."""

from typing import Optional

from odhall.shared.constants.io import (
    EXIT_BLOW_UP,
    EXIT_USAGE,
)
from odhall.shared.exceptions.base import OdhallError


class PhysicsError(OdhallError):
    """Base class for model-evaluation errors."""


class VacuumProximityError(PhysicsError):
    """Raised when the density 1 + rho drops below the configured floor."""

    def __init__(self, minimum: float, floor: float, t: Optional[float] = None):
        self.minimum = minimum
        self.floor = floor
        message = f"Density too close to vacuum: min(1+rho) = {minimum:.6g} < floor {floor:.6g}"
        details = {"minimum": minimum, "floor": floor}
        if t is not None:
            message += f" at t = {t:.6g}"
            details["t"] = t
        super().__init__(message, exit_code=EXIT_BLOW_UP, details=details)


class BlowUpError(PhysicsError):
    """Raised when the state stops being finite."""

    def __init__(self, t: float, step: int):
        self.t = t
        message = f"Non-finite state detected at t = {t:.6g} (step {step})"
        super().__init__(message, exit_code=EXIT_BLOW_UP, details={"t": t, "step": step})


class AmplitudeTooLargeError(PhysicsError):
    """Raised when generated initial data violates the density floor."""

    def __init__(self, amplitude: float, suggested_max: float, minimum: float):
        self.suggested_max = suggested_max
        message = (
            f"Initial amplitude {amplitude:.6g} gives min(1+rho) = {minimum:.6g}; "
            f"use an amplitude below {suggested_max:.6g}"
        )
        super().__init__(
            message,
            exit_code=EXIT_USAGE,
            details={
                "amplitude": amplitude,
                "suggested_max": suggested_max,
                "minimum": minimum,
            },
        )


class SmallnessBudgetError(PhysicsError):
    """Raised when E_0(0) exceeds the configured smallness budget."""

    def __init__(self, energy: float, budget: float):
        message = f"Initial energy E0(0) = {energy:.6g} exceeds budget {budget:.6g}"
        super().__init__(
            message, exit_code=EXIT_USAGE, details={"energy": energy, "budget": budget}
        )
