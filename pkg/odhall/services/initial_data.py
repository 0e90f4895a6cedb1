"""Seeded small-amplitude initial data.

Every populated component gets unit-modulus Fourier coefficients with the
phases of a seeded real Gaussian field, so the data is real, and a radial
profile that is flat up to the cutoff xi_c and decays like
(|xi| / xi_c)^-p beyond it. Only retained modes are populated and the mean
is zero. Each unknown is then normalised so that its components have rms
amplitude epsilon, which makes the state exactly linear in epsilon.
"""

from typing import (
    Dict,
    Optional,
)

import numpy as np
import scipy.fft

from odhall.core.logging import logger
from odhall.domain.entities import (
    Grid,
    ModelKind,
    ModelParams,
    ModelState,
    state_type,
)
from odhall.domain.services.hallmhd import project_divfree_array
from odhall.domain.services.spectral import SpectralWorkspace
from odhall.schemas import IcConfig
from odhall.shared.exceptions import (
    AmplitudeTooLargeError,
    ConfigurationError,
)


def radial_profile(grid: Grid, cutoff: float, tail_exponent: float) -> np.ndarray:
    """1 for |xi| <= xi_c, (|xi| / xi_c)^-p above."""
    ratio = grid.xi_abs / cutoff
    profile = np.ones(grid.shape)
    high = ratio > 1.0
    profile[high] = ratio[high] ** (-tail_exponent)
    return profile


def _unit_phases(rng: np.random.Generator, grid: Grid) -> np.ndarray:
    coeffs = scipy.fft.fft2(rng.standard_normal(grid.shape))
    modulus = np.abs(coeffs)
    return np.where(modulus > 0, coeffs / np.where(modulus > 0, modulus, 1.0), 0.0)


def generate_shape(ic: IcConfig, grid: Grid, kind: ModelKind) -> np.ndarray:
    """Amplitude-free stacked coefficients: every populated unknown has unit rms."""
    cls = state_type(kind)
    m = len(cls.FIELD_NAMES)
    groups: Dict[str, tuple] = cls.groups()
    profile = radial_profile(grid, ic.cutoff, ic.tail_exponent) * grid.dealias_mask
    profile[0, 0] = 0.0

    children = np.random.SeedSequence(ic.seed).spawn(m)
    shape = np.zeros((m, *grid.shape), dtype=np.complex128)
    for name, indices in groups.items():
        if name not in ic.fields:
            continue
        for i in indices:
            shape[i] = _unit_phases(np.random.default_rng(children[i]), grid) * profile
        if name == "B" and ic.divfree:
            shape[list(indices)] = project_divfree_array(grid, shape[list(indices)])
        block = shape[list(indices)]
        rms = np.sqrt(np.sum(np.abs(block) ** 2) / len(indices)) / grid.box_length
        if rms > 0:
            shape[list(indices)] = block / rms
    return shape


def generate(
    ic: IcConfig,
    grid: Grid,
    kind: ModelKind,
    params: ModelParams,
    workspace: Optional[SpectralWorkspace] = None,
) -> ModelState:
    """Initial state for ``kind`` on ``grid``.

    Raises:
        ConfigurationError: If the cutoff exceeds the largest grid wavenumber
        AmplitudeTooLargeError: If 1 + rho would drop below the density floor
    """
    if ic.cutoff > grid.max_wavenumber:
        raise ConfigurationError(
            "ic.cutoff", f"must not exceed the largest grid wavenumber {grid.max_wavenumber:.6g}", ic.cutoff
        )
    kind = ModelKind(kind)
    array = ic.amplitude * generate_shape(ic, grid, kind)

    ws = workspace if workspace is not None else SpectralWorkspace(grid)
    rho = ws.inverse(array[0])
    minimum = float(np.min(1.0 + rho))
    if minimum < params.rho_floor:
        depth = -float(np.min(rho))
        suggested = ic.amplitude * (1.0 - params.rho_floor) / depth
        raise AmplitudeTooLargeError(ic.amplitude, suggested, minimum)

    logger.debug(
        "initial_data_generated",
        model=kind.value,
        seed=ic.seed,
        amplitude=ic.amplitude,
        min_density=minimum,
    )
    return state_type(kind).from_array(grid, array, params)
