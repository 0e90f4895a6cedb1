"""Periodic grid entity.

A ``Grid`` fixes the number of modes per dimension and the side length of the
periodic box [0, L)^2 that stands in for the plane. Everything that depends
only on the grid (wavenumbers, the dealiasing set, the conjugate-index map)
is computed lazily and cached on the instance.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from odhall.shared.constants import DEFAULT_BOX_LENGTH
from odhall.shared.exceptions import InvalidGridError


@dataclass(frozen=True)
class Grid:
    """N x N periodic grid on a box of side ``box_length``.

    Array axis 0 carries x1 and axis 1 carries x2. Mode indices follow the
    FFT ordering {0, 1, ..., n/2 - 1, -n/2, ..., -1}.
    """

    n: int
    box_length: float = DEFAULT_BOX_LENGTH

    def __post_init__(self):
        """Validate grid parameters."""
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise InvalidGridError("n", self.n, "must be an integer")
        if self.n <= 0 or self.n % 2:
            raise InvalidGridError("n", self.n, "must be even and positive")
        if not (math.isfinite(self.box_length) and self.box_length > 0):
            raise InvalidGridError("box_length", self.box_length, "must be positive")

    @property
    def shape(self) -> tuple:
        return (self.n, self.n)

    @property
    def fundamental(self) -> float:
        """Lowest nonzero wavenumber 2*pi/L."""
        return 2.0 * math.pi / self.box_length

    @property
    def cell_area(self) -> float:
        return (self.box_length / self.n) ** 2

    @cached_property
    def mode_index(self) -> np.ndarray:
        """Integer mode numbers along one axis in FFT order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).round().astype(np.int64)

    @cached_property
    def k1(self) -> np.ndarray:
        return np.broadcast_to(self.mode_index[:, None], self.shape)

    @cached_property
    def k2(self) -> np.ndarray:
        return np.broadcast_to(self.mode_index[None, :], self.shape)

    @cached_property
    def xi1(self) -> np.ndarray:
        return self.fundamental * self.k1

    @cached_property
    def xi2(self) -> np.ndarray:
        return self.fundamental * self.k2

    @cached_property
    def dxi1(self) -> np.ndarray:
        """xi1 for first derivatives: the Nyquist row is zeroed to keep real data real."""
        return np.where(self.k1 == -self.n // 2, 0.0, self.xi1)

    @cached_property
    def dxi2(self) -> np.ndarray:
        return np.where(self.k2 == -self.n // 2, 0.0, self.xi2)

    @cached_property
    def xi_sq(self) -> np.ndarray:
        return self.xi1**2 + self.xi2**2

    @cached_property
    def xi_abs(self) -> np.ndarray:
        return np.sqrt(self.xi_sq)

    @property
    def max_wavenumber(self) -> float:
        """Radius of the corner of the frequency box, (2*pi/L)(n/2)sqrt(2)."""
        return self.fundamental * (self.n // 2) * math.sqrt(2.0)

    @property
    def dealias_cutoff(self) -> int:
        """Largest retained |k| per axis."""
        return (self.n - 1) // 3

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Boolean mask of retained modes: 3 max(|k1|, |k2|) < n."""
        return 3 * np.maximum(np.abs(self.k1), np.abs(self.k2)) < self.n

    @cached_property
    def neg_index(self) -> np.ndarray:
        """Flat index of the mode -k for every flat mode index k."""
        neg = (-self.mode_index) % self.n
        return (neg[:, None] * self.n + neg[None, :]).ravel()

    @cached_property
    def coordinates(self) -> tuple:
        """Physical sample points (x1, x2), each of shape (n, n)."""
        x = np.arange(self.n) * (self.box_length / self.n)
        return tuple(np.meshgrid(x, x, indexing="ij"))

    @property
    def saturation_time(self) -> float:
        """Time scale (L / 2 pi)^2 past which the lowest mode dominates decay."""
        return (self.box_length / (2.0 * math.pi)) ** 2

    def wavevectors(self) -> np.ndarray:
        """All grid wavevectors as an (n*n, 2) array in flat order."""
        return np.stack([self.xi1.ravel(), self.xi2.ravel()], axis=-1)

    def conjugate_flip(self, coeffs: np.ndarray) -> np.ndarray:
        """Return the array g with g(k) = coeffs(-k) over the last two axes."""
        flipped = np.flip(coeffs, axis=(-2, -1))
        return np.roll(flipped, 1, axis=(-2, -1))
