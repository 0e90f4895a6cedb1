"""Nonlinear right-hand sides of the two systems."""

from dataclasses import dataclass

import numpy as np

from odhall.domain.entities.fields import (
    SpectralField,
    SymTensorField,
    VectorField,
)


@dataclass(frozen=True, eq=False)
class OldroydRhs:
    """Nonlinear terms (F, G, H) of the Oldroyd-B system."""

    F: SpectralField
    G: VectorField
    H: SymTensorField

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.F.coeffs[None], self.G.stack(), self.H.stack()])


@dataclass(frozen=True, eq=False)
class HallMhdRhs:
    """Nonlinear terms (F1, G1, H1) of the Hall-MHD system."""

    F1: SpectralField
    G1: VectorField
    H1: VectorField

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.F1.coeffs[None], self.G1.stack(), self.H1.stack()])
