"""Model state entities.

A model state is one of two tagged shapes:

* Oldroyd-B: density perturbation rho, velocity u and symmetric stress tau.
* Hall-MHD: density perturbation rho, velocity u and magnetic field B.

Both are convertible to and from a stacked coefficient array of shape
(m, n, n) in canonical order, which is the layout the integrator, the
snapshot store and the diagnostics operate on.
"""

from dataclasses import (
    dataclass,
    field,
)
from enum import Enum
from typing import (
    Dict,
    Tuple,
    Union,
)

import numpy as np

from odhall.domain.entities.fields import (
    SpectralField,
    SymTensorField,
    VectorField,
)
from odhall.domain.entities.grid import Grid
from odhall.shared.constants import (
    DEFAULT_B,
    DEFAULT_GAMMA,
    DEFAULT_RHO_FLOOR,
)
from odhall.shared.exceptions import DimensionMismatchError


class ModelKind(str, Enum):
    """Which system a state belongs to."""

    OLDROYD = "oldroyd"
    HALLMHD = "hallmhd"


@dataclass(frozen=True)
class OldroydParams:
    """Physical parameters of the Oldroyd-B system (a = 1, omega = 1/2 fixed)."""

    gamma: float = DEFAULT_GAMMA
    b: float = DEFAULT_B
    rho_floor: float = DEFAULT_RHO_FLOOR


@dataclass(frozen=True)
class HallMhdParams:
    """Physical parameters of the Hall-MHD system (mu = nu = 1, lambda = 0 fixed)."""

    gamma: float = DEFAULT_GAMMA
    rho_floor: float = DEFAULT_RHO_FLOOR
    hall: bool = True


@dataclass(frozen=True, eq=False)
class OldroydState:
    """Unknowns (rho, u, tau) of the Oldroyd-B system."""

    rho: SpectralField
    u: VectorField
    tau: SymTensorField
    params: OldroydParams = field(default_factory=OldroydParams)

    kind = ModelKind.OLDROYD
    FIELD_NAMES = ("rho", "u1", "u2", "tau11", "tau12", "tau22")
    # Frobenius weighting of the off-diagonal stress entry
    NORM_WEIGHTS = (1.0, 1.0, 1.0, 1.0, 2.0, 1.0)
    EXTRA_NAME = "tau"

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @property
    def extra(self) -> SymTensorField:
        return self.tau

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.rho.coeffs[None], self.u.stack(), self.tau.stack()])

    @classmethod
    def from_array(
        cls, grid: Grid, array: np.ndarray, params: OldroydParams = OldroydParams()
    ) -> "OldroydState":
        _check_stack(grid, array, len(cls.FIELD_NAMES))
        return cls(
            rho=SpectralField(grid, array[0]),
            u=VectorField.from_array(grid, array[1:3]),
            tau=SymTensorField.from_array(grid, array[3:6]),
            params=params,
        )

    @classmethod
    def zeros(cls, grid: Grid, params: OldroydParams = OldroydParams()) -> "OldroydState":
        return cls.from_array(
            grid, np.zeros((len(cls.FIELD_NAMES), *grid.shape), dtype=np.complex128), params
        )

    def with_array(self, array: np.ndarray) -> "OldroydState":
        return self.from_array(self.grid, array, self.params)

    @classmethod
    def groups(cls) -> Dict[str, Tuple[int, ...]]:
        """Component indices of each unknown in the stacked array."""
        return {"rho": (0,), "u": (1, 2), "tau": (3, 4, 5)}


@dataclass(frozen=True, eq=False)
class HallMhdState:
    """Unknowns (rho, u, B) of the Hall-MHD system."""

    rho: SpectralField
    u: VectorField
    B: VectorField
    params: HallMhdParams = field(default_factory=HallMhdParams)

    kind = ModelKind.HALLMHD
    FIELD_NAMES = ("rho", "u1", "u2", "B1", "B2")
    NORM_WEIGHTS = (1.0, 1.0, 1.0, 1.0, 1.0)
    EXTRA_NAME = "B"

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @property
    def extra(self) -> VectorField:
        return self.B

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.rho.coeffs[None], self.u.stack(), self.B.stack()])

    @classmethod
    def from_array(
        cls, grid: Grid, array: np.ndarray, params: HallMhdParams = HallMhdParams()
    ) -> "HallMhdState":
        _check_stack(grid, array, len(cls.FIELD_NAMES))
        return cls(
            rho=SpectralField(grid, array[0]),
            u=VectorField.from_array(grid, array[1:3]),
            B=VectorField.from_array(grid, array[3:5]),
            params=params,
        )

    @classmethod
    def zeros(cls, grid: Grid, params: HallMhdParams = HallMhdParams()) -> "HallMhdState":
        return cls.from_array(
            grid, np.zeros((len(cls.FIELD_NAMES), *grid.shape), dtype=np.complex128), params
        )

    def with_array(self, array: np.ndarray) -> "HallMhdState":
        return self.from_array(self.grid, array, self.params)

    @classmethod
    def groups(cls) -> Dict[str, Tuple[int, ...]]:
        """Component indices of each unknown in the stacked array."""
        return {"rho": (0,), "u": (1, 2), "B": (3, 4)}


ModelState = Union[OldroydState, HallMhdState]
ModelParams = Union[OldroydParams, HallMhdParams]

STATE_TYPES = {
    ModelKind.OLDROYD: OldroydState,
    ModelKind.HALLMHD: HallMhdState,
}


def state_type(kind: ModelKind):
    """State class for a model kind."""
    return STATE_TYPES[ModelKind(kind)]


def _check_stack(grid: Grid, array: np.ndarray, count: int) -> None:
    expected = (count, *grid.shape)
    if array.shape != expected:
        raise DimensionMismatchError(expected, array.shape, "stacked state")
