"""Exponential time differencing for the two model systems.

The stiff linear part is propagated exactly per wavenumber. The nonlinear
part enters through the two-stage exponential Runge-Kutta scheme

    a*  = e^{hA} a + h phi1(hA) N(a)
    a+  = a* + h phi2(hA) (N(a*) - N(a))

with phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2. Tables hold
e^{hA}, h phi1(hA) and h phi2(hA) for every retained mode. They come from a
batched eigendecomposition; modes whose eigenvector matrix is too
ill-conditioned fall back to a Pade exponential of an augmented block matrix.
"""

from dataclasses import dataclass
from typing import (
    Callable,
    Optional,
    Tuple,
)

import numpy as np
import scipy.linalg

from odhall.core.config import settings
from odhall.core.logging import logger
from odhall.domain.entities import (
    Grid,
    ModelKind,
    ModelState,
)
from odhall.domain.services import ModelInterface
from odhall.shared.constants import (
    PHI_SERIES_RADIUS,
    PHI_SERIES_TERMS,
)
from odhall.shared.exceptions import (
    BlowUpError,
    SpectralError,
    VacuumProximityError,
)

RhsFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class PropagatorTable:
    """Per-mode matrices e^{hA}, h phi1(hA), h phi2(hA) on the retained modes.

    ``modes`` lists the flat grid indices the tables refer to, in ascending
    order, so that row 0 is the xi = 0 mode.
    """

    grid: Grid
    dt: float
    kind: ModelKind
    modes: np.ndarray
    expo: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    fallback_count: int = 0

    @property
    def n_fields(self) -> int:
        return self.expo.shape[-1]

    def gather(self, array: np.ndarray) -> np.ndarray:
        """Stacked (m, n, n) coefficients -> (modes, m)."""
        return array.reshape(self.n_fields, -1)[:, self.modes].T

    def scatter(self, values: np.ndarray) -> np.ndarray:
        """(modes, m) -> stacked (m, n, n) coefficients, zero off the retained set."""
        out = np.zeros((self.n_fields, self.grid.n * self.grid.n), dtype=np.complex128)
        out[:, self.modes] = values.T
        return out.reshape(self.n_fields, *self.grid.shape)

    @staticmethod
    def apply(matrices: np.ndarray, values: np.ndarray) -> np.ndarray:
        return np.einsum("kij,kj->ki", matrices, values)


def phi_functions(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Elementwise e^z, phi1(z) and phi2(z); Taylor series near z = 0."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < PHI_SERIES_RADIUS
    zs = np.where(small, z, 0.0)
    zl = np.where(small, 1.0, z)

    series1 = np.zeros_like(z)
    series2 = np.zeros_like(z)
    term1 = np.ones_like(z)  # z^k / (k+1)!
    term2 = 0.5 * np.ones_like(z)  # z^k / (k+2)!
    for k in range(PHI_SERIES_TERMS):
        series1 += term1
        series2 += term2
        term1 = term1 * zs / (k + 2)
        term2 = term2 * zs / (k + 3)

    expz = np.exp(z)
    phi1 = np.where(small, series1, (np.exp(zl) - 1.0) / zl)
    phi2 = np.where(small, series2, (np.exp(zl) - 1.0 - zl) / zl**2)
    return expz, phi1, phi2


def _augmented_exponentials(hA: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """e^{hA}, phi1(hA), phi2(hA) from expm([[hA, I, 0], [0, 0, I], [0, 0, 0]])."""
    count, m, _ = hA.shape
    eye = np.broadcast_to(np.eye(m, dtype=np.complex128), (count, m, m))
    block = np.zeros((count, 3 * m, 3 * m), dtype=np.complex128)
    block[:, :m, :m] = hA
    block[:, :m, m : 2 * m] = eye
    block[:, m : 2 * m, 2 * m :] = eye
    full = scipy.linalg.expm(block)
    return full[:, :m, :m], full[:, :m, m : 2 * m], full[:, :m, 2 * m :]


def precompute_propagators(
    grid: Grid,
    dt: float,
    model: ModelInterface,
    cond_limit: Optional[float] = None,
) -> PropagatorTable:
    """Build the propagator table of ``model`` for step ``dt``.

    Raises:
        SpectralError: If dt is negative or the model is bound to another grid
    """
    if dt < 0:
        raise SpectralError(f"time step must be nonnegative, got {dt}")
    if model.grid != grid:
        raise SpectralError("model and propagator grid differ")
    cond_limit = cond_limit or settings.PROPAGATOR_COND_LIMIT

    modes = np.flatnonzero(grid.dealias_mask.ravel())
    hA = dt * model.symbol_table()[modes]
    count, m, _ = hA.shape

    lam, V = np.linalg.eig(hA)
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(V)
    bad = ~np.isfinite(cond) | (cond > cond_limit)
    good = ~bad

    expo = np.empty_like(hA)
    phi1 = np.empty_like(hA)
    phi2 = np.empty_like(hA)

    if np.any(good):
        Vg = V[good]
        Vinv = np.linalg.inv(Vg)
        ez, p1, p2 = phi_functions(lam[good])
        expo[good] = Vg @ (ez[..., None] * Vinv)
        phi1[good] = dt * (Vg @ (p1[..., None] * Vinv))
        phi2[good] = dt * (Vg @ (p2[..., None] * Vinv))
    if np.any(bad):
        e_bad, p1_bad, p2_bad = _augmented_exponentials(hA[bad])
        expo[bad] = e_bad
        phi1[bad] = dt * p1_bad
        phi2[bad] = dt * p2_bad

    # entry k -> entry of -k must be the complex conjugate
    position = np.full(grid.n * grid.n, -1, dtype=np.int64)
    position[modes] = np.arange(count)
    mirror = position[grid.neg_index[modes]]
    expo = 0.5 * (expo + expo[mirror].conj())
    phi1 = 0.5 * (phi1 + phi1[mirror].conj())
    phi2 = 0.5 * (phi2 + phi2[mirror].conj())

    expo[0], phi1[0], phi2[0] = model.zero_mode_propagators(dt)

    fallback_count = int(np.count_nonzero(bad))
    logger.info(
        "propagators_precomputed",
        model=model.kind.value,
        n=grid.n,
        dt=dt,
        modes=count,
        pade_fallbacks=fallback_count,
    )
    return PropagatorTable(
        grid=grid,
        dt=dt,
        kind=model.kind,
        modes=modes,
        expo=expo,
        phi1=phi1,
        phi2=phi2,
        fallback_count=fallback_count,
    )


def advance(
    array: np.ndarray,
    table: PropagatorTable,
    rhs_fn: Optional[RhsFn] = None,
) -> np.ndarray:
    """One step on a stacked coefficient array."""
    a = table.gather(array)
    linear = table.apply(table.expo, a)
    if rhs_fn is None:
        return table.scatter(linear)
    n_a = table.gather(rhs_fn(array))
    a_star = linear + table.apply(table.phi1, n_a)
    n_star = table.gather(rhs_fn(table.scatter(a_star)))
    return table.scatter(a_star + table.apply(table.phi2, n_star - n_a))


def check_finite(array: np.ndarray, t: float, step_index: int) -> None:
    """Raise BlowUpError if the array holds NaN or Inf."""
    if not np.all(np.isfinite(array)):
        raise BlowUpError(t, step_index)


def step(
    state: ModelState,
    table: PropagatorTable,
    rhs_fn: Optional[RhsFn] = None,
    t: float = 0.0,
    step_index: int = 0,
) -> ModelState:
    """Advance a state by one step of size ``table.dt``.

    With ``rhs_fn=None`` the step is exactly the linear propagator.

    Raises:
        BlowUpError: If the new state is not finite
        VacuumProximityError: Propagated from the right-hand side
    """
    if state.grid != table.grid or state.kind != table.kind:
        raise SpectralError("propagator table does not match the state")
    try:
        new = advance(state.to_array(), table, rhs_fn)
    except VacuumProximityError as e:
        if not np.isfinite(e.minimum):
            raise BlowUpError(t + table.dt, step_index + 1)
        raise VacuumProximityError(e.minimum, e.floor, t)
    check_finite(new, t + table.dt, step_index + 1)
    return state.with_array(new)


def integrate(
    state: ModelState,
    table: PropagatorTable,
    n_steps: int,
    rhs_fn: Optional[RhsFn] = None,
    t0: float = 0.0,
) -> ModelState:
    """Advance a state by ``n_steps`` steps of the table."""
    for k in range(n_steps):
        state = step(state, table, rhs_fn, t=t0 + k * table.dt, step_index=k)
    return state


@dataclass(frozen=True)
class LinearVerifyResult:
    """Largest per-mode relative deviation from the exact semigroup."""

    max_error: float
    worst_mode: Tuple[int, int]
    populated_modes: int
    t: float


def exact_linear_evolution(model: ModelInterface, array: np.ndarray, t: float) -> np.ndarray:
    """e^{t A(xi)} a(xi) on every mode where a is nonzero (Pade expm)."""
    m = model.n_fields
    flat = array.reshape(m, -1)
    populated = np.flatnonzero(np.any(flat != 0, axis=0))
    out = np.zeros_like(flat)
    if populated.size:
        symbols = model.symbol_table()[populated]
        props = scipy.linalg.expm(t * symbols)
        out[:, populated] = np.einsum("kij,kj->ki", props, flat[:, populated].T).T
    return out.reshape(array.shape)


def linear_verify(
    model: ModelInterface, initial: np.ndarray, dt: float, n_steps: int
) -> LinearVerifyResult:
    """Compare n linear steps against the exact semigroup, mode by mode.

    The error at mode xi is ||a_num(xi) - a_exact(xi)|| / ||a(0, xi)||.
    """
    table = precompute_propagators(model.grid, dt, model)
    current = initial
    for k in range(n_steps):
        current = advance(current, table)
        check_finite(current, (k + 1) * dt, k + 1)
    t = n_steps * dt
    exact = exact_linear_evolution(model, initial, t)

    m = model.n_fields
    start = np.linalg.norm(initial.reshape(m, -1), axis=0)
    deviation = np.linalg.norm((current - exact).reshape(m, -1), axis=0)
    populated = start > 0
    if not np.any(populated):
        return LinearVerifyResult(0.0, (0, 0), 0, t)
    errors = np.zeros_like(start)
    errors[populated] = deviation[populated] / start[populated]
    worst = int(np.argmax(errors))
    k1, k2 = divmod(worst, model.grid.n)
    return LinearVerifyResult(
        max_error=float(errors[worst]),
        worst_mode=(int(model.grid.mode_index[k1]), int(model.grid.mode_index[k2])),
        populated_modes=int(np.count_nonzero(populated)),
        t=t,
    )
