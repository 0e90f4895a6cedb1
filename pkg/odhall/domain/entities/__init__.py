"""Domain entities: grids, spectral fields and model states."""

from .fields import (
    AnyField,
    SpectralField,
    SymTensorField,
    VectorField,
    field_components,
)
from .grid import Grid
from .rhs import (
    HallMhdRhs,
    OldroydRhs,
)
from .states import (
    HallMhdParams,
    HallMhdState,
    ModelKind,
    ModelParams,
    ModelState,
    OldroydParams,
    OldroydState,
    state_type,
)

__all__ = [
    "AnyField",
    "Grid",
    "HallMhdParams",
    "HallMhdRhs",
    "HallMhdState",
    "ModelKind",
    "ModelParams",
    "ModelState",
    "OldroydParams",
    "OldroydRhs",
    "OldroydState",
    "SpectralField",
    "SymTensorField",
    "VectorField",
    "field_components",
    "state_type",
]
