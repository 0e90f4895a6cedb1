"""Model interface shared by the Oldroyd-B and Hall-MHD systems.

This module defines the contract the integrator and the diagnostics rely on:
a per-wavenumber linear symbol, the closed-form propagators at xi = 0 and a
nonlinear right-hand side on stacked coefficient arrays.
"""

from abc import (
    ABC,
    abstractmethod,
)
from typing import (
    Optional,
    Tuple,
)

import numpy as np

from odhall.domain.entities import (
    Grid,
    ModelKind,
    ModelParams,
    ModelState,
)
from odhall.domain.services.spectral import SpectralWorkspace
from odhall.shared.exceptions import VacuumProximityError


class ModelInterface(ABC):
    """Abstract interface of a model system on a fixed grid."""

    kind: ModelKind
    state_cls: type

    def __init__(
        self,
        grid: Grid,
        params: ModelParams,
        workspace: Optional[SpectralWorkspace] = None,
    ):
        """Bind the model to a grid and its parameters.

        Args:
            grid: Grid the states live on
            params: Physical parameters of the system
            workspace: Transform workspace owned by the caller (one per worker)
        """
        self.grid = grid
        self.params = params
        self.workspace = workspace if workspace is not None else SpectralWorkspace(grid)
        self._symbols: Optional[np.ndarray] = None

    @property
    def n_fields(self) -> int:
        return len(self.state_cls.FIELD_NAMES)

    @abstractmethod
    def linear_symbol(self, xi: np.ndarray) -> np.ndarray:
        """Linear symbol A(xi) for wavevectors of shape (..., 2).

        Returns:
            np.ndarray: Complex matrices of shape (..., m, m)
        """
        pass

    @abstractmethod
    def zero_mode_propagators(self, dt: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Closed forms of (e^{hA}, h phi1(hA), h phi2(hA)) at xi = 0."""
        pass

    @abstractmethod
    def nonlinear_rhs(self, state: ModelState):
        """Nonlinear right-hand side of the state.

        Raises:
            VacuumProximityError: If 1 + rho drops below the density floor
        """
        pass

    def symbol_table(self) -> np.ndarray:
        """A(xi) at every grid wavevector, shape (n*n, m, m) in flat mode order."""
        if self._symbols is None:
            self._symbols = self.linear_symbol(self.grid.wavevectors())
        return self._symbols

    def linear_rhs_array(self, array: np.ndarray) -> np.ndarray:
        """A(xi) a(xi) for a stacked coefficient array."""
        m = self.n_fields
        flat = array.reshape(m, -1).T
        out = np.einsum("kij,kj->ki", self.symbol_table(), flat)
        return out.T.reshape(array.shape)

    def rhs_array(self, array: np.ndarray) -> np.ndarray:
        """Nonlinear right-hand side on a stacked coefficient array."""
        state = self.state_cls.from_array(self.grid, array, self.params)
        return self.nonlinear_rhs(state).to_array()

    def make_state(self, array: np.ndarray) -> ModelState:
        return self.state_cls.from_array(self.grid, array, self.params)

    def density_samples(self, rho_coeffs: np.ndarray, t: Optional[float] = None) -> np.ndarray:
        """Physical samples of rho, checked against the density floor."""
        rho = self.workspace.inverse(rho_coeffs)
        check_density_floor(rho, self.params.rho_floor, t)
        return rho


def check_density_floor(rho: np.ndarray, floor: float, t: Optional[float] = None) -> None:
    """Raise VacuumProximityError when min(1 + rho) < floor."""
    minimum = float(np.min(1.0 + rho)) if rho.size else 1.0
    if not minimum >= floor:
        raise VacuumProximityError(minimum, floor, t)
