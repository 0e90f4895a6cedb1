"""Diagnostics along trajectories.

Energy functionals use the spectral weights

    w(xi)  = |xi|^{2 sigma} (1 + |xi|^2)^{2 - sigma}
    w1(xi) = |xi|^{2 sigma} (1 + |xi|^2)^{1 - sigma}

so that E_sigma = sum w (c |rho|^2 + |u|^2 + |tau|^2) + 2 eta <u, grad rho>_{w1},
where c is the density weight (1 for the plain form, gamma for the runs).
The Hall-MHD functionals replace tau by B.
"""

import math
from typing import (
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
from scipy import stats

from odhall.core.logging import logger
from odhall.domain.entities import (
    Grid,
    ModelKind,
    ModelState,
)
from odhall.domain.services import build_model
from odhall.domain.services.littlewood_paley import (
    FilterBank,
    besov_norm,
    build_filter_bank,
)
from odhall.domain.services.spectral import (
    l2_norm,
    weighted_sum,
)
from odhall.schemas import (
    FitResult,
    RateCheck,
    TimeSeriesRecord,
)
from odhall.shared.constants import (
    CSV_COLUMNS,
    DEFAULT_C2,
    DEFAULT_M_SIGMA,
    DERIVED_COLUMNS,
    M_TRACKER_COLUMNS,
    MIN_FIT_SAMPLES,
    N_TRACKER_WEIGHT_EXPONENT,
    SATURATION_FRACTION,
)
from odhall.shared.exceptions import (
    AnalysisError,
    CoercivityError,
    ConfigurationError,
    FitWindowError,
    LogDomainError,
)


class EnergyPair(NamedTuple):
    E: float
    D: float


class EnergyBalance(NamedTuple):
    dE_dt: float
    D: float
    balance: float


class Trackers(NamedTuple):
    n: float
    m: float


# ---------------------------------------------------------------------------
# Energy functionals
# ---------------------------------------------------------------------------


def energy_weights(grid: Grid, sigma: float) -> Tuple[np.ndarray, np.ndarray]:
    """The multipliers (w, w1) of E_sigma and D_sigma."""
    homogeneous = grid.xi_sq**sigma
    return homogeneous * (1.0 + grid.xi_sq) ** (2.0 - sigma), homogeneous * (1.0 + grid.xi_sq) ** (
        1.0 - sigma
    )


def _component_weights(state: ModelState, density_weight: float) -> np.ndarray:
    weights = np.asarray(state.NORM_WEIGHTS, dtype=np.float64).copy()
    weights[0] = density_weight
    return weights


def coercivity_threshold(grid: Grid, density_weight: float = 1.0) -> float:
    """Largest eta for which E_sigma >= 1/2 of its main part, by Cauchy-Schwarz."""
    nonzero = grid.xi_abs > 0
    peak = float(np.max(grid.xi_abs[nonzero] / (1.0 + grid.xi_sq[nonzero])))
    return math.sqrt(density_weight) / (2.0 * peak)


def check_coercivity(grid: Grid, eta: float, density_weight: float = 1.0) -> float:
    """Validate eta against the coercivity threshold and return the threshold.

    Raises:
        CoercivityError: If eta exceeds the threshold
    """
    if eta < 0:
        raise ConfigurationError("params.eta", "must be nonnegative", eta)
    eta_max = coercivity_threshold(grid, density_weight)
    if eta > eta_max:
        raise CoercivityError(eta, eta_max)
    return eta_max


def _check_sigma(sigma: float) -> None:
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"sigma must lie in [0, 1], got {sigma}")


def _energy_form(
    state: ModelState,
    a: np.ndarray,
    b: np.ndarray,
    sigma: float,
    eta: float,
    density_weight: float,
) -> float:
    """Symmetric bilinear form whose diagonal is E_sigma."""
    grid = state.grid
    w, w1 = energy_weights(grid, sigma)
    weights = _component_weights(state, density_weight)
    main = np.einsum("i,ixy,xy->", weights, (a.conj() * b).real, w)
    if eta == 0:
        return float(main)
    grad_a = np.stack([1j * grid.xi1 * a[0], 1j * grid.xi2 * a[0]])
    grad_b = np.stack([1j * grid.xi1 * b[0], 1j * grid.xi2 * b[0]])
    cross = np.sum(w1 * (b[1:3] * grad_a.conj() + a[1:3] * grad_b.conj()).real)
    return float(main + eta * cross)


def _dissipation(state: ModelState, sigma: float, eta: float) -> float:
    grid = state.grid
    w, w1 = energy_weights(grid, sigma)
    a = state.to_array()
    gamma = state.params.gamma
    rho_part = eta * gamma * float(np.sum(w1 * grid.xi_sq * np.abs(a[0]) ** 2))
    div_u = grid.xi1 * a[1] + grid.xi2 * a[2]
    grad_u = weighted_sum(a[1:3], np.ones(2), w * grid.xi_sq)
    div_part = float(np.sum(w * np.abs(div_u) ** 2))
    if state.kind == ModelKind.OLDROYD:
        stress = weighted_sum(a[3:6], np.asarray(state.NORM_WEIGHTS[3:]), w)
        return rho_part + 0.5 * grad_u + 0.5 * div_part + stress
    magnetic = weighted_sum(a[3:5], np.ones(2), w * grid.xi_sq)
    return rho_part + grad_u + div_part + magnetic


def energy_functionals(
    state: ModelState,
    sigma: float,
    eta: float,
    density_weight: float = 1.0,
) -> EnergyPair:
    """E_sigma and D_sigma of a state (barred versions for Hall-MHD).

    Raises:
        ConfigurationError: If eta is negative
        CoercivityError: If eta exceeds the coercivity threshold
    """
    _check_sigma(sigma)
    check_coercivity(state.grid, eta, density_weight)
    a = state.to_array()
    energy = _energy_form(state, a, a, sigma, eta, density_weight)
    return EnergyPair(E=energy, D=_dissipation(state, sigma, eta))


def energy_rate(
    state: ModelState,
    sigma: float,
    eta: float,
    density_weight: float = 1.0,
    nonlinear: bool = True,
    model=None,
) -> EnergyBalance:
    """Instantaneous dE_sigma/dt from the full time derivative A a + N(a).

    The balance dE/dt + D is free of time-discretisation error; it is
    nonpositive for the linear flow when density_weight = gamma and eta <= 1/2.
    """
    _check_sigma(sigma)
    if model is None:
        model = build_model(state.kind, state.grid, state.params)
    a = state.to_array()
    derivative = model.linear_rhs_array(a)
    if nonlinear:
        derivative = derivative + model.rhs_array(a)
    rate = 2.0 * _energy_form(state, a, derivative, sigma, eta, density_weight)
    dissipation = _dissipation(state, sigma, eta)
    return EnergyBalance(dE_dt=rate, D=dissipation, balance=rate + dissipation)


# ---------------------------------------------------------------------------
# Fourier splitting
# ---------------------------------------------------------------------------


def lowfreq_radius(t: float, c2: float, which: str = "S") -> float:
    """Radius of S(t) = {|xi|^2 <= C2/(1+t)} or S0(t) = {|xi|^2 <= 2 C2 f'/f}, f = ln^3(e+t)."""
    if which == "S":
        return math.sqrt(c2 / (1.0 + t))
    if which == "S0":
        shifted = math.e + t
        return math.sqrt(2.0 * c2 * 3.0 / (shifted * math.log(shifted)))
    raise ValueError(f"which must be 'S' or 'S0', got {which!r}")


def lowfreq_energy(
    state: ModelState,
    t: float,
    c2: float = DEFAULT_C2,
    which: str = "S",
    include_extra: bool = True,
) -> float:
    """sum over the splitting ball of |rho|^2 + |u|^2 (+ |tau|^2 or |B|^2)."""
    if c2 <= 0:
        raise ConfigurationError("params.c2", "must be positive", c2)
    radius = lowfreq_radius(t, c2, which)
    inside = state.grid.xi_abs <= radius
    a = state.to_array()
    weights = np.asarray(state.NORM_WEIGHTS, dtype=np.float64)
    if not include_extra:
        a, weights = a[:3], weights[:3]
    return weighted_sum(a, weights, inside.astype(np.float64))


# ---------------------------------------------------------------------------
# Trackers
# ---------------------------------------------------------------------------


def tracker_series(
    records: Sequence[TimeSeriesRecord], m_column: str = "besov_m1"
) -> List[Trackers]:
    """Running N(t) = sup (1+s)^{1/2} E0(s) and M(t) = sup ||.||_{B^-sigma_M} per record."""
    result = []
    n_sup = -math.inf
    m_sup = -math.inf
    for record in records:
        n_sup = max(n_sup, (1.0 + record.t) ** N_TRACKER_WEIGHT_EXPONENT * record.E0)
        m_sup = max(m_sup, record.value(m_column))
        result.append(Trackers(n=n_sup, m=m_sup))
    return result


def update_trackers(
    records: Sequence[TimeSeriesRecord], m_column: str = "besov_m1"
) -> Trackers:
    """Trackers (N, M) at the last record of a nonempty history."""
    if not records:
        raise AnalysisError("tracker history is empty")
    return tracker_series(records, m_column)[-1]


# ---------------------------------------------------------------------------
# Decay fits
# ---------------------------------------------------------------------------


def fit_decay(
    series: Iterable[Tuple[float, float]],
    window: Tuple[float, float],
    column: str = "value",
) -> FitResult:
    """Least-squares slope of log(value) against log(1 + t) inside the window.

    Raises:
        FitWindowError: If the window holds fewer than 8 samples or leaves the series
        LogDomainError: If a value in the window is not positive
    """
    points = sorted((float(t), float(v)) for t, v in series)
    t0, t1 = window
    selected = [(t, v) for t, v in points if t0 <= t <= t1]
    if (
        len(selected) < MIN_FIT_SAMPLES
        or not points
        or t0 < points[0][0] - 1e-9
        or t1 > points[-1][0] + 1e-9 * max(1.0, points[-1][0])
    ):
        raise FitWindowError(t0, t1, len(selected), MIN_FIT_SAMPLES)
    for t, v in selected:
        if not v > 0:
            raise LogDomainError(t, v)

    x = np.log1p(np.array([t for t, _ in selected]))
    y = np.log(np.array([v for _, v in selected]))
    fit = stats.linregress(x, y)
    residual = y - (fit.intercept + fit.slope * x)
    return FitResult(
        column=column,
        exponent=float(fit.slope),
        intercept=float(fit.intercept),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
        window=(t0, t1),
        samples=len(selected),
    )


def derived_series(records: Sequence[TimeSeriesRecord], column: str) -> List[Tuple[float, float]]:
    """(t, value) pairs of a CSV column or of l2_rho_u / l2_all."""
    if column == "l2_rho_u":
        return [(r.t, math.hypot(r.l2_rho, r.l2_u)) for r in records]
    if column == "l2_all":
        return [(r.t, math.sqrt(r.l2_rho**2 + r.l2_u**2 + r.l2_extra**2)) for r in records]
    if column not in CSV_COLUMNS:
        raise AnalysisError(
            f"unknown column {column!r}",
            details={"known": list(CSV_COLUMNS) + list(DERIVED_COLUMNS)},
        )
    return [(r.t, r.value(column)) for r in records]


# (column, target exponent, kind, default tolerance); kind 'bound' only caps the fit
DECAY_TARGETS = {
    ModelKind.OLDROYD: (
        ("l2_rho_u", -0.5, "rate", 0.10),
        ("l2_extra", -1.0, "rate", 0.15),
        ("h1_grad", -1.0, "rate", 0.15),
        ("E0", -1.0, "rate", 0.15),
        ("E1", -2.0, "rate", 0.15),
        ("l2_rho_u", -0.25, "bound", 0.0),
        ("E0", -0.5, "bound", 0.0),
        ("E1", -1.5, "bound", 0.0),
    ),
    ModelKind.HALLMHD: (
        ("l2_all", -0.5, "rate", 0.10),
        ("h1_grad", -1.0, "rate", 0.15),
        ("E0", -1.0, "rate", 0.15),
        ("E1", -2.0, "rate", 0.15),
        ("l2_all", -0.25, "bound", 0.0),
        ("E0", -0.5, "bound", 0.0),
        ("E1", -1.5, "bound", 0.0),
    ),
}


def check_decay_rates(
    records: Sequence[TimeSeriesRecord],
    model: ModelKind,
    window: Tuple[float, float],
    tolerance: Optional[float] = None,
) -> List[RateCheck]:
    """Fit every decay target of the model over one window."""
    checks = []
    for column, target, kind, default_tol in DECAY_TARGETS[ModelKind(model)]:
        fit = fit_decay(derived_series(records, column), window, column)
        tol = default_tol if tolerance is None or kind == "bound" else tolerance
        if kind == "rate":
            passed = abs(fit.exponent - target) <= tol
        else:
            passed = fit.exponent <= target + tol
        checks.append(
            RateCheck(column=column, target=target, kind=kind, fit=fit, tolerance=tol, passed=passed)
        )
    return checks


def saturation_limit(grid: Grid, t_end: float) -> float:
    """Latest time a decay fit may use before the lowest mode dominates."""
    return min(t_end, SATURATION_FRACTION * grid.saturation_time)


def check_saturation(window: Tuple[float, float], grid: Grid, t_end: float) -> bool:
    """Warn when a fit window runs past the saturation limit; True if it does not."""
    limit = saturation_limit(grid, t_end)
    if window[1] > limit:
        logger.warning(
            "fit_window_past_saturation",
            window=list(window),
            limit=limit,
            saturation_time=grid.saturation_time,
        )
        return False
    return True


# ---------------------------------------------------------------------------
# Energy inequality
# ---------------------------------------------------------------------------


def energy_inequality_check(
    records: Sequence[TimeSeriesRecord], sigma: int, quadrature: str = "left"
) -> float:
    """max_k (E(t_{k+1}) - E(t_k)) / dt_k + D, with D at t_k ("left") or min of both ends ("min")."""
    if len(records) < 2:
        raise AnalysisError("energy inequality check needs at least two records")
    if quadrature not in ("left", "min"):
        raise ValueError(f"quadrature must be 'left' or 'min', got {quadrature!r}")
    e_col, d_col = f"E{sigma}", f"D{sigma}"
    worst = -math.inf
    for before, after in zip(records[:-1], records[1:]):
        dt = after.t - before.t
        slope = (after.value(e_col) - before.value(e_col)) / dt
        if quadrature == "left":
            dissipation = before.value(d_col)
        else:
            dissipation = min(before.value(d_col), after.value(d_col))
        worst = max(worst, slope + dissipation)
    return worst


# ---------------------------------------------------------------------------
# Record assembly
# ---------------------------------------------------------------------------


class DiagnosticsEngine:
    """Builds the diagnostics rows of one run and carries the running trackers."""

    def __init__(
        self,
        grid: Grid,
        eta: float,
        density_weight: float = 1.0,
        c2: float = DEFAULT_C2,
        m_sigma: float = DEFAULT_M_SIGMA,
        bank: Optional[FilterBank] = None,
    ):
        """Initialize the engine and validate eta.

        Args:
            grid: Grid of the run
            eta: Cross-term weight of E_sigma
            density_weight: Weight of the density norm in E_sigma
            c2: Fourier-splitting constant
            m_sigma: Besov index of the M tracker
            bank: Filter bank, built from the grid when omitted

        Raises:
            CoercivityError: If eta exceeds the coercivity threshold
        """
        self.grid = grid
        self.eta = eta
        self.density_weight = density_weight
        self.c2 = c2
        self.m_column = M_TRACKER_COLUMNS[float(m_sigma)]
        self.bank = bank if bank is not None else build_filter_bank(grid)
        self.eta_max = check_coercivity(grid, eta, density_weight)
        self._n_sup = -math.inf
        self._m_sup = -math.inf

    def energy(self, state: ModelState, sigma: int) -> float:
        return energy_functionals(state, sigma, self.eta, self.density_weight).E

    def gradient_h1(self, state: ModelState) -> float:
        """||grad(rho, u, tau|B)||_{H^1}."""
        multiplier = (1.0 + self.grid.xi_sq) * self.grid.xi_sq
        return math.sqrt(
            weighted_sum(state.to_array(), np.asarray(state.NORM_WEIGHTS), multiplier)
        )

    def measure(self, state: ModelState, t: float) -> TimeSeriesRecord:
        """Diagnostics row at time t; advances the trackers."""
        e0 = energy_functionals(state, 0, self.eta, self.density_weight)
        e1 = energy_functionals(state, 1, self.eta, self.density_weight)
        besov_m1 = besov_norm(state, -1.0, self.bank)
        besov_mhalf = besov_norm(state, -0.5, self.bank)
        tracked = besov_m1 if self.m_column == "besov_m1" else besov_mhalf
        self._n_sup = max(self._n_sup, (1.0 + t) ** N_TRACKER_WEIGHT_EXPONENT * e0.E)
        self._m_sup = max(self._m_sup, tracked)
        record = TimeSeriesRecord(
            t=t,
            l2_rho=l2_norm(state.rho),
            l2_u=l2_norm(state.u),
            l2_extra=l2_norm(state.extra),
            h1_grad=self.gradient_h1(state),
            E0=e0.E,
            E1=e1.E,
            D0=e0.D,
            D1=e1.D,
            besov_m1=besov_m1,
            besov_mhalf=besov_mhalf,
            lowfreq_S=lowfreq_energy(state, t, self.c2, "S"),
            lowfreq_S0=lowfreq_energy(state, t, self.c2, "S0"),
            s_radius=lowfreq_radius(t, self.c2, "S"),
            n_tracker=self._n_sup,
            m_tracker=self._m_sup,
        )
        logger.debug("diagnostics_row", t=t, E0=record.E0, l2_rho=record.l2_rho)
        return record
