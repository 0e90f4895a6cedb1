"""Spectral field entities.

Fields hold Fourier coefficients under the unitary L2 normalisation
f_hat = (L / n^2) FFT(f), so that ||f||_{L2}^2 = sum |f_hat|^2. Vector and
symmetric-tensor fields are fixed-size tuples of scalar fields sharing one
grid.
"""

from dataclasses import dataclass
from typing import (
    Tuple,
    Union,
)

import numpy as np

from odhall.domain.entities.grid import Grid
from odhall.shared.exceptions import (
    DimensionMismatchError,
    SpectralError,
)

Scalar = Union[int, float, complex]


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Complex Fourier coefficients of a scalar field on a grid."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != self.grid.shape:
            raise DimensionMismatchError(self.grid.shape, coeffs.shape, "SpectralField")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def _check_grid(self, other: "SpectralField") -> None:
        if other.grid != self.grid:
            raise SpectralError(
                f"Fields live on different grids: {self.grid} and {other.grid}"
            )

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_grid(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_grid(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)

    def __mul__(self, scalar: Scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    @property
    def mean_coefficient(self) -> complex:
        """Coefficient at xi = 0 (L times the spatial mean)."""
        return complex(self.coeffs[0, 0])

    def is_real_data(self, rtol: float = 1e-12) -> bool:
        """Whether the coefficients satisfy f_hat(-xi) = conj(f_hat(xi))."""
        defect = np.max(np.abs(self.grid.conjugate_flip(self.coeffs) - self.coeffs.conj()))
        scale = max(float(np.max(np.abs(self.coeffs))), 1.0e-300)
        return defect <= rtol * scale


@dataclass(frozen=True, eq=False)
class VectorField:
    """Planar vector field (u1, u2)."""

    components: Tuple[SpectralField, SpectralField]

    def __post_init__(self):
        if len(self.components) != 2:
            raise DimensionMismatchError((2,), (len(self.components),), "VectorField")
        _check_shared_grid(self.components)

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    @property
    def x(self) -> SpectralField:
        return self.components[0]

    @property
    def y(self) -> SpectralField:
        return self.components[1]

    def stack(self) -> np.ndarray:
        return np.stack([c.coeffs for c in self.components])

    @classmethod
    def from_array(cls, grid: Grid, array: np.ndarray) -> "VectorField":
        return cls(tuple(SpectralField(grid, array[i]) for i in range(2)))

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls.from_array(grid, np.zeros((2, *grid.shape), dtype=np.complex128))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(tuple(-a for a in self.components))

    def __mul__(self, scalar: Scalar) -> "VectorField":
        return VectorField(tuple(a * scalar for a in self.components))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class SymTensorField:
    """Symmetric 2x2 tensor field stored as (t11, t12, t22).

    The (2, 1) entry is the (1, 2) entry by construction. Norms use the
    Frobenius weighting |t|^2 = |t11|^2 + 2|t12|^2 + |t22|^2.
    """

    components: Tuple[SpectralField, SpectralField, SpectralField]

    NORM_WEIGHTS = (1.0, 2.0, 1.0)

    def __post_init__(self):
        if len(self.components) != 3:
            raise DimensionMismatchError((3,), (len(self.components),), "SymTensorField")
        _check_shared_grid(self.components)

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    @property
    def xx(self) -> SpectralField:
        return self.components[0]

    @property
    def xy(self) -> SpectralField:
        return self.components[1]

    @property
    def yy(self) -> SpectralField:
        return self.components[2]

    def stack(self) -> np.ndarray:
        return np.stack([c.coeffs for c in self.components])

    @classmethod
    def from_array(cls, grid: Grid, array: np.ndarray) -> "SymTensorField":
        return cls(tuple(SpectralField(grid, array[i]) for i in range(3)))

    @classmethod
    def zeros(cls, grid: Grid) -> "SymTensorField":
        return cls.from_array(grid, np.zeros((3, *grid.shape), dtype=np.complex128))

    def __sub__(self, other: "SymTensorField") -> "SymTensorField":
        return SymTensorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __mul__(self, scalar: Scalar) -> "SymTensorField":
        return SymTensorField(tuple(a * scalar for a in self.components))

    __rmul__ = __mul__


AnyField = Union[SpectralField, VectorField, SymTensorField]


def _check_shared_grid(components) -> None:
    grid = components[0].grid
    for component in components[1:]:
        if component.grid != grid:
            raise SpectralError("All components of a field must share one grid")


def field_components(field: AnyField) -> Tuple[np.ndarray, np.ndarray]:
    """Return stacked coefficients (m, n, n) and per-component norm weights (m,)."""
    if isinstance(field, SpectralField):
        return field.coeffs[None], np.ones(1)
    if isinstance(field, SymTensorField):
        return field.stack(), np.asarray(SymTensorField.NORM_WEIGHTS)
    return field.stack(), np.ones(len(field.components))
