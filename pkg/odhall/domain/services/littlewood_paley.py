"""Dyadic (Littlewood-Paley) decomposition and homogeneous Besov norms.

The radial profile is phi(r) = psi(r) / sum_{m=-2..2} psi(2^-m r) with psi a
smooth bump supported on (3/4, 8/3). Since at most two dilates of psi
overlap at any radius, the five-term denominator equals the full dyadic
sum and the blocks phi(2^-j xi) form an exact partition of unity.

Besov norms here are ||f||_{B^s_{2,inf}} = max_j 2^{js} ||Delta_j f||_{L2};
for a multi-field state the max is also taken over the unknowns.
"""

import math
from dataclasses import dataclass
from typing import (
    Dict,
    List,
    Union,
)

import numpy as np

from odhall.domain.entities import (
    AnyField,
    Grid,
    ModelState,
    SpectralField,
    field_components,
)
from odhall.domain.services.spectral import (
    fractional_derivative,
    inverse_transform,
    l2_norm,
)
from odhall.shared.constants import (
    LP_INNER_RADIUS,
    LP_OUTER_RADIUS,
)
from odhall.shared.exceptions import (
    DyadicRangeError,
    SpectralError,
)


def _mollifier(x: np.ndarray) -> np.ndarray:
    """exp(-1/x) for x > 0, else 0."""
    x = np.asarray(x, dtype=np.float64)
    positive = x > 0
    safe = np.where(positive, x, 1.0)
    return np.where(positive, np.exp(-1.0 / safe), 0.0)


def bump(r: np.ndarray) -> np.ndarray:
    """Smooth bump psi supported on (3/4, 8/3)."""
    return _mollifier(r - LP_INNER_RADIUS) * _mollifier(LP_OUTER_RADIUS - r)


def dyadic_profile(r: np.ndarray) -> np.ndarray:
    """The partition profile phi(r), valued in [0, 1] and supported on [3/4, 8/3]."""
    r = np.asarray(r, dtype=np.float64)
    numerator = bump(r)
    denominator = sum(bump(r * 2.0**-m) for m in range(-2, 3))
    inside = numerator > 0
    return np.where(inside, numerator / np.where(inside, denominator, 1.0), 0.0)


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Dyadic multipliers phi(2^-j xi) for j in [j_min, j_max] on one grid.

    ``multipliers[j - j_min]`` is the real (n, n) array of block j. The bank
    is read-only after construction.
    """

    grid: Grid
    j_min: int
    j_max: int
    multipliers: np.ndarray

    @property
    def j_values(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def multiplier(self, j: int) -> np.ndarray:
        self.check_index(j)
        return self.multipliers[j - self.j_min]

    def check_index(self, j: int) -> None:
        if not self.j_min <= j <= self.j_max:
            raise DyadicRangeError(j, self.j_min, self.j_max)


def dyadic_range(grid: Grid) -> tuple:
    """Block indices whose annuli cover every nonzero grid frequency."""
    j_min = math.floor(math.log2(grid.fundamental * 3.0 / 8.0))
    j_max = math.ceil(math.log2(grid.max_wavenumber * 4.0 / 3.0))
    return j_min, j_max


def build_filter_bank(grid: Grid) -> FilterBank:
    """Sample phi(2^-j |xi|) on the grid for every covering block j."""
    j_min, j_max = dyadic_range(grid)
    multipliers = np.stack(
        [dyadic_profile(grid.xi_abs * 2.0**-j) for j in range(j_min, j_max + 1)]
    )
    multipliers.setflags(write=False)
    return FilterBank(grid=grid, j_min=j_min, j_max=j_max, multipliers=multipliers)


def dyadic_block(f: SpectralField, j: int, bank: FilterBank) -> SpectralField:
    """Delta_j f = F^-1(phi(2^-j xi) f_hat); the mean mode is dropped."""
    _check_bank(f.grid, bank)
    coeffs = bank.multiplier(j) * f.coeffs
    coeffs[0, 0] = 0.0
    return SpectralField(f.grid, coeffs)


def _check_bank(grid: Grid, bank: FilterBank) -> None:
    if bank.grid != grid:
        raise SpectralError("Filter bank was built for a different grid")


def _group_block_norms(coeffs: np.ndarray, weights: np.ndarray, bank: FilterBank) -> np.ndarray:
    power = np.einsum("i,ixy->xy", weights, np.abs(coeffs) ** 2)
    power[0, 0] = 0.0
    return np.sqrt(np.einsum("jxy,xy->j", bank.multipliers**2, power))


def block_norms(field: AnyField, bank: FilterBank) -> np.ndarray:
    """||Delta_j f||_{L2} for every j in the bank (vector/tensor norms combined)."""
    _check_bank(field.grid, bank)
    coeffs, weights = field_components(field)
    return _group_block_norms(coeffs, weights, bank)


def state_block_norms(state: ModelState, bank: FilterBank) -> Dict[str, np.ndarray]:
    """Block norms of each unknown of a state (rho, u, tau or B)."""
    _check_bank(state.grid, bank)
    array = state.to_array()
    weights = np.asarray(state.NORM_WEIGHTS)
    result = {}
    for name, indices in state.groups().items():
        idx = list(indices)
        result[name] = _group_block_norms(array[idx], weights[idx], bank)
    return result


def _weighted_max(norms: np.ndarray, s: float, bank: FilterBank) -> float:
    return float(np.max(2.0 ** (s * bank.j_values) * norms))


def besov_norm(obj: Union[AnyField, ModelState], s: float, bank: FilterBank) -> float:
    """Homogeneous Besov norm B^s_{2,inf}: max_j 2^{js} ||Delta_j f||_{L2}.

    For a model state the result is the max over its unknowns.
    """
    if hasattr(obj, "to_array"):
        return max(
            _weighted_max(norms, s, bank) for norms in state_block_norms(obj, bank).values()
        )
    return _weighted_max(block_norms(obj, bank), s, bank)


def low_block_seminorm(
    obj: Union[AnyField, ModelState], j_cut: int, bank: FilterBank
) -> float:
    """sup_{j <= j_cut} 2^-j ||Delta_j f||_{L2}."""
    bank.check_index(j_cut)
    keep = bank.j_values <= j_cut
    if hasattr(obj, "to_array"):
        groups = list(state_block_norms(obj, bank).values())
    else:
        groups = [block_norms(obj, bank)]
    weighted = [2.0 ** (-bank.j_values[keep]) * norms[keep] for norms in groups]
    return float(max(np.max(w) for w in weighted))


def block_table(field: AnyField, s: float, bank: FilterBank) -> List[dict]:
    """Rows (j, scale, block_l2, weighted) of the per-block dump."""
    norms = block_norms(field, bank)
    rows = []
    for j, norm in zip(bank.j_values, norms):
        scale = 2.0 ** float(j)
        rows.append(
            {"j": int(j), "scale": scale, "block_l2": float(norm), "weighted": scale**s * float(norm)}
        )
    return rows


def lp_norm(values: np.ndarray, p: float, grid: Grid) -> float:
    """Physical-space L^p norm of grid samples (p = inf gives the max)."""
    if math.isinf(p):
        return float(np.max(np.abs(values)))
    return float((np.sum(np.abs(values) ** p) * grid.cell_area) ** (1.0 / p))


def gagliardo_nirenberg_theta(s: float, s1: float, s2: float, p: float) -> float:
    """Interpolation exponent theta from s + 2(1/2 - 1/p) = s1 (1 - theta) + theta s2.

    Raises:
        ValueError: If s1 == s2 or theta falls outside [0, 1].
    """
    if s1 == s2:
        raise ValueError("Gagliardo-Nirenberg needs s1 != s2")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    theta = (s + 1.0 - 2.0 * inv_p - s1) / (s2 - s1)
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta = {theta} outside [0, 1] for (s, s1, s2, p) = {(s, s1, s2, p)}")
    scaling_gap = s + 2.0 * (0.5 - inv_p) - (s1 * (1.0 - theta) + theta * s2)
    assert abs(scaling_gap) < 1e-12
    return theta


def gagliardo_nirenberg_ratio(
    f: SpectralField,
    s: float,
    s1: float,
    s2: float,
    p: float,
) -> float:
    """||Lambda^s f||_{L^p} / (||Lambda^{s1} f||^{1-theta} ||Lambda^{s2} f||^theta)."""
    theta = gagliardo_nirenberg_theta(s, s1, s2, p)
    values = inverse_transform(fractional_derivative(f, s))
    numerator = lp_norm(values, p, f.grid)
    low = l2_norm(fractional_derivative(f, s1))
    high = l2_norm(fractional_derivative(f, s2))
    return numerator / (low ** (1.0 - theta) * high**theta)
