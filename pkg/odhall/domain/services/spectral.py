"""Spectral substrate: transforms, differentiation, dealiased products, norms.

Normalisation: f_hat = (L / n^2) FFT(f), f(x) = (1/L) sum f_hat(xi) e^{i xi.x}.
Under it Parseval is an equality, a constant c has f_hat(0) = c L and the
product of two single modes with amplitudes a and b is the single mode a b / L.

Products follow the 2/3 rule: a mode (k1, k2) is retained iff
3 max(|k1|, |k2|) < n. Inputs are truncated to the retained set, multiplied
in physical space, transformed back and truncated again, which equals the
exact truncated convolution because the aliased band never reaches a
retained mode.
"""

from typing import (
    Optional,
    Sequence,
    Union,
)

import numpy as np
import scipy.fft

from odhall.core.config import settings
from odhall.domain.entities import (
    AnyField,
    Grid,
    ModelState,
    SpectralField,
    VectorField,
    field_components,
)
from odhall.shared.exceptions import (
    DimensionMismatchError,
    MeanModeError,
    SpectralError,
)

# relative size of |f_hat(0)| treated as a zero mean
MEAN_MODE_RTOL = 1e-12


class SpectralWorkspace:
    """Array-level transform kernels bound to one grid.

    Works on arrays whose last two axes are the grid axes, so a stacked state
    of shape (m, n, n) is transformed in one call. A workspace is owned by a
    single worker.
    """

    def __init__(self, grid: Grid, workers: Optional[int] = None):
        self.grid = grid
        self.workers = workers or settings.FFT_WORKERS
        self.forward_scale = grid.box_length / grid.n**2
        self.inverse_scale = grid.n**2 / grid.box_length
        self.mask = grid.dealias_mask
        self.ixi1 = 1j * grid.dxi1
        self.ixi2 = 1j * grid.dxi2

    def _check(self, array: np.ndarray) -> None:
        if array.shape[-2:] != self.grid.shape:
            raise DimensionMismatchError(self.grid.shape, array.shape[-2:], "grid axes")

    def forward(self, values: np.ndarray) -> np.ndarray:
        """Physical samples -> coefficients."""
        self._check(values)
        return self.forward_scale * scipy.fft.fft2(values, axes=(-2, -1), workers=self.workers)

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        """Coefficients -> real physical samples."""
        self._check(coeffs)
        values = scipy.fft.ifft2(coeffs, axes=(-2, -1), workers=self.workers)
        return self.inverse_scale * values.real

    def truncate(self, coeffs: np.ndarray) -> np.ndarray:
        return np.where(self.mask, coeffs, 0.0)

    def physical(self, coeffs: np.ndarray) -> np.ndarray:
        """Truncate to the retained set, then go to physical space."""
        return self.inverse(self.truncate(coeffs))

    def spectral(self, values: np.ndarray) -> np.ndarray:
        """Go to spectral space, then truncate to the retained set."""
        return self.truncate(self.forward(values))

    def d1(self, coeffs: np.ndarray) -> np.ndarray:
        return self.ixi1 * coeffs

    def d2(self, coeffs: np.ndarray) -> np.ndarray:
        return self.ixi2 * coeffs

    def product(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Dealiased product of two coefficient arrays."""
        return self.spectral(self.physical(f) * self.physical(g))


def _workspace(grid: Grid, workspace: Optional[SpectralWorkspace]) -> SpectralWorkspace:
    if workspace is not None and workspace.grid == grid:
        return workspace
    return SpectralWorkspace(grid)


def transform(
    grid: Grid, values: np.ndarray, workspace: Optional[SpectralWorkspace] = None
) -> SpectralField:
    """Transform real physical samples of shape (n, n) into a SpectralField."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.shape:
        raise DimensionMismatchError(grid.shape, values.shape, "transform")
    return SpectralField(grid, _workspace(grid, workspace).forward(values))


def inverse_transform(
    field: SpectralField, workspace: Optional[SpectralWorkspace] = None
) -> np.ndarray:
    """Physical samples of a real-data SpectralField."""
    return _workspace(field.grid, workspace).inverse(field.coeffs)


def fractional_derivative(f: SpectralField, s: float) -> SpectralField:
    """Lambda^s f, the multiplier |xi|^s.

    The xi = 0 coefficient is kept for s = 0 and zeroed otherwise. For s < 0
    the input must be mean-zero.

    Raises:
        MeanModeError: If s < 0 and f has a nonzero mean.
    """
    if s == 0:
        return SpectralField(f.grid, f.coeffs.copy())
    mean = abs(f.coeffs[0, 0])
    if s < 0 and mean > MEAN_MODE_RTOL * max(float(np.linalg.norm(f.coeffs)), 1e-300):
        raise MeanModeError(s, mean)
    multiplier = np.zeros(f.grid.shape)
    nonzero = f.grid.xi_abs > 0
    multiplier[nonzero] = f.grid.xi_abs[nonzero] ** s
    return SpectralField(f.grid, multiplier * f.coeffs)


def gradient(f: SpectralField) -> VectorField:
    """grad f, multiplier i xi."""
    grid = f.grid
    return VectorField(
        (SpectralField(grid, 1j * grid.dxi1 * f.coeffs), SpectralField(grid, 1j * grid.dxi2 * f.coeffs))
    )


def divergence(v: VectorField) -> SpectralField:
    """div v, multiplier i xi."""
    grid = v.grid
    return SpectralField(grid, 1j * grid.dxi1 * v.x.coeffs + 1j * grid.dxi2 * v.y.coeffs)


def laplacian(f: SpectralField) -> SpectralField:
    """Delta f, multiplier -|xi|^2."""
    return SpectralField(f.grid, -f.grid.xi_sq * f.coeffs)


def curl2d(v: VectorField) -> SpectralField:
    """Scalar curl d1 v2 - d2 v1."""
    grid = v.grid
    return SpectralField(grid, 1j * grid.dxi1 * v.y.coeffs - 1j * grid.dxi2 * v.x.coeffs)


def perp_curl2d(w: SpectralField) -> VectorField:
    """Curl of a scalar, (d2 w, -d1 w)."""
    grid = w.grid
    return VectorField(
        (SpectralField(grid, 1j * grid.dxi2 * w.coeffs), SpectralField(grid, -1j * grid.dxi1 * w.coeffs))
    )


def dealias(f: SpectralField) -> SpectralField:
    """Restrict f to the retained mode set."""
    return SpectralField(f.grid, np.where(f.grid.dealias_mask, f.coeffs, 0.0))


def dealiased_product(
    f: SpectralField, g: SpectralField, workspace: Optional[SpectralWorkspace] = None
) -> SpectralField:
    """Truncated convolution (1/L) (f_hat * g_hat) on the retained set."""
    if f.grid != g.grid:
        raise SpectralError("dealiased_product needs fields on one grid")
    ws = _workspace(f.grid, workspace)
    return SpectralField(f.grid, ws.product(f.coeffs, g.coeffs))


def sobolev_weight(grid: Grid, s: float) -> np.ndarray:
    """The multiplier (1 + |xi|^2)^s."""
    return (1.0 + grid.xi_sq) ** s


def weighted_sum(coeffs: np.ndarray, weights: np.ndarray, multiplier: np.ndarray) -> float:
    """sum_i weights[i] sum_xi multiplier(xi) |coeffs[i](xi)|^2."""
    power = np.abs(coeffs) ** 2
    return float(np.einsum("i,ixy,xy->", weights, power, multiplier))


def state_components(state: ModelState) -> tuple:
    """Stacked coefficients and norm weights of a model state."""
    return state.to_array(), np.asarray(state.NORM_WEIGHTS)


def sobolev_norm(obj: Union[AnyField, ModelState], s: float) -> float:
    """||f||_{H^s} with ||f||^2 = sum (1 + |xi|^2)^s |f_hat|^2.

    Vector fields and states sum over their components; stress components
    use the Frobenius weighting.
    """
    if s < 0:
        raise SpectralError(f"sobolev_norm needs s >= 0, got {s}")
    if hasattr(obj, "to_array"):
        coeffs, weights = state_components(obj)
    else:
        coeffs, weights = field_components(obj)
    return float(np.sqrt(weighted_sum(coeffs, weights, sobolev_weight(obj.grid, s))))


def l2_norm(obj: Union[AnyField, ModelState]) -> float:
    return sobolev_norm(obj, 0.0)


def group_norm(
    array: np.ndarray, indices: Sequence[int], weights: Sequence[float], multiplier: np.ndarray
) -> float:
    """Weighted norm of a subset of components of a stacked array."""
    idx = list(indices)
    return float(
        np.sqrt(weighted_sum(array[idx], np.asarray(weights)[idx], multiplier))
    )
