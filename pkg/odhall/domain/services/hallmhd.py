"""Compressible Hall-MHD system in perturbation form.

Unknowns (rho, u, B) with mu = nu = 1 and lambda = 0. Linear part in Fourier
variables:

    rho_t + i xi.u = F1
    u_t + |xi|^2 u + xi (xi.u) + i gamma xi rho = G1
    B_t + |xi|^2 B = H1

Nonlinear part:

    F1 = -div(rho u)
    G1 = -u.grad u - I(rho) (Delta + grad div) u - (curl B) x B / (1 + rho) + k(rho) grad rho
    H1 = curl(u x B) - curl[(curl B) x B / (1 + rho)]

Planar conventions: curl v = d1 v2 - d2 v1 (a scalar), curl h = (d2 h, -d1 h)
for a scalar h, and (w z) x B = w (-B2, B1). H1 is re-projected onto
divergence-free fields after every evaluation.
"""

from typing import Optional

import numpy as np

from odhall.domain.entities import (
    HallMhdRhs,
    HallMhdState,
    ModelKind,
    SpectralField,
    VectorField,
)
from odhall.domain.services.model_base import (
    ModelInterface,
    check_density_floor,
)
from odhall.domain.services.oldroyd import material_coeffs
from odhall.domain.services.spectral import SpectralWorkspace
from odhall.shared.constants import (
    DEFAULT_GAMMA,
    DEFAULT_RHO_FLOOR,
)


def _ws(field, workspace: Optional[SpectralWorkspace]) -> SpectralWorkspace:
    if workspace is not None and workspace.grid == field.grid:
        return workspace
    return SpectralWorkspace(field.grid)


def _lorentz_array(ws: SpectralWorkspace, B_hat: np.ndarray) -> np.ndarray:
    omega = ws.physical(ws.d1(B_hat[1]) - ws.d2(B_hat[0]))
    B1, B2 = ws.physical(B_hat)
    return ws.spectral(np.stack([-omega * B2, omega * B1]))


def _induction_array(ws: SpectralWorkspace, u_hat: np.ndarray, B_hat: np.ndarray) -> np.ndarray:
    u1, u2 = ws.physical(u_hat)
    B1, B2 = ws.physical(B_hat)
    du = ws.physical(np.stack([ws.d1(u_hat), ws.d2(u_hat)]))
    dB = ws.physical(np.stack([ws.d1(B_hat), ws.d2(B_hat)]))
    div_u = du[0, 0] + du[1, 1]
    div_B = dB[0, 0] + dB[1, 1]
    terms = []
    for j, (uj, Bj) in enumerate(((u1, B1), (u2, B2))):
        terms.append(
            uj * div_B
            - (u1 * dB[0, j] + u2 * dB[1, j])
            + (B1 * du[0, j] + B2 * du[1, j])
            - Bj * div_u
        )
    return ws.spectral(np.stack(terms))


def _hall_array(ws: SpectralWorkspace, lorentz_hat: np.ndarray, inv_density: np.ndarray) -> np.ndarray:
    scaled = ws.spectral(ws.physical(lorentz_hat) * inv_density)
    h = ws.d1(scaled[1]) - ws.d2(scaled[0])
    return np.stack([ws.d2(h), -ws.d1(h)])


def project_divfree_array(grid, V_hat: np.ndarray) -> np.ndarray:
    """Leray projection of stacked (2, n, n) coefficients, using derivative wavenumbers."""
    d1, d2 = grid.dxi1, grid.dxi2
    sq = d1**2 + d2**2
    safe = np.where(sq > 0, sq, 1.0)
    along = np.where(sq > 0, (d1 * V_hat[0] + d2 * V_hat[1]) / safe, 0.0)
    return np.stack([V_hat[0] - d1 * along, V_hat[1] - d2 * along])


def lorentz_term(B: VectorField, workspace: Optional[SpectralWorkspace] = None) -> VectorField:
    """(curl B) x B computed as omega_B (-B2, B1) with omega_B = curl2d(B)."""
    ws = _ws(B, workspace)
    return VectorField.from_array(B.grid, _lorentz_array(ws, B.stack()))


def lorentz_identity_form(
    B: VectorField, workspace: Optional[SpectralWorkspace] = None
) -> VectorField:
    """(B.grad) B - 1/2 grad |B|^2, an independent evaluation of lorentz_term."""
    ws = _ws(B, workspace)
    B_hat = B.stack()
    B1, B2 = ws.physical(B_hat)
    dB = ws.physical(np.stack([ws.d1(B_hat), ws.d2(B_hat)]))
    advect = ws.spectral(np.stack([B1 * dB[0, j] + B2 * dB[1, j] for j in range(2)]))
    pressure = ws.spectral(B1 * B1 + B2 * B2)
    out = advect - 0.5 * np.stack([ws.d1(pressure), ws.d2(pressure)])
    return VectorField.from_array(B.grid, out)


def hall_term(
    B: VectorField,
    rho: SpectralField,
    rho_floor: float = DEFAULT_RHO_FLOOR,
    workspace: Optional[SpectralWorkspace] = None,
) -> VectorField:
    """curl[(curl B) x B / (1 + rho)] as the vector perp_curl2d(h).

    Raises:
        VacuumProximityError: If min(1 + rho) < rho_floor
    """
    ws = _ws(B, workspace)
    rho_values = ws.inverse(rho.coeffs)
    check_density_floor(rho_values, rho_floor)
    inv_density = ws.physical(ws.forward(1.0 / (1.0 + rho_values)))
    out = _hall_array(ws, _lorentz_array(ws, B.stack()), inv_density)
    return VectorField.from_array(B.grid, out)


def induction_transport(
    u: VectorField, B: VectorField, workspace: Optional[SpectralWorkspace] = None
) -> VectorField:
    """curl(u x B) from u div B - (u.grad) B + (B.grad) u - B div u."""
    ws = _ws(B, workspace)
    return VectorField.from_array(B.grid, _induction_array(ws, u.stack(), B.stack()))


def induction_curl_form(
    u: VectorField, B: VectorField, workspace: Optional[SpectralWorkspace] = None
) -> VectorField:
    """curl(u x B) as perp_curl2d(u1 B2 - u2 B1)."""
    ws = _ws(B, workspace)
    u1, u2 = ws.physical(u.stack())
    B1, B2 = ws.physical(B.stack())
    psi = ws.spectral(u1 * B2 - u2 * B1)
    return VectorField.from_array(B.grid, np.stack([ws.d2(psi), -ws.d1(psi)]))


def project_divfree(V: VectorField) -> VectorField:
    """Leray projection V - xi (xi.V) / |xi|^2; the xi = 0 mode is kept."""
    return VectorField.from_array(V.grid, project_divfree_array(V.grid, V.stack()))


def linear_symbol_hallmhd(xi: np.ndarray, gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    """A(xi) for the unknowns (rho, u1, u2, B1, B2)."""
    xi = np.asarray(xi, dtype=np.float64)
    x1, x2 = xi[..., 0], xi[..., 1]
    sq = x1**2 + x2**2
    A = np.zeros(xi.shape[:-1] + (5, 5), dtype=np.complex128)
    A[..., 0, 1] = -1j * x1
    A[..., 0, 2] = -1j * x2
    A[..., 1, 0] = -1j * gamma * x1
    A[..., 2, 0] = -1j * gamma * x2
    A[..., 1, 1] = -sq - x1 * x1
    A[..., 1, 2] = -x1 * x2
    A[..., 2, 1] = -x1 * x2
    A[..., 2, 2] = -sq - x2 * x2
    A[..., 3, 3] = -sq
    A[..., 4, 4] = -sq
    return A


class HallMhdModel(ModelInterface):
    """Hall-MHD system bound to a grid; ``params.hall = False`` gives plain MHD."""

    kind = ModelKind.HALLMHD
    state_cls = HallMhdState

    def linear_symbol(self, xi: np.ndarray) -> np.ndarray:
        return linear_symbol_hallmhd(xi, self.params.gamma)

    def zero_mode_propagators(self, dt: float):
        eye = np.eye(5, dtype=np.complex128)
        return eye, dt * eye, 0.5 * dt * eye

    def nonlinear_rhs(self, state: HallMhdState, t: Optional[float] = None) -> HallMhdRhs:
        """Assemble F1, G1, H1 with every product dealiased and H1 projected.

        Raises:
            VacuumProximityError: If 1 + rho drops below the density floor
        """
        ws = self.workspace
        grid = self.grid
        a = state.to_array()
        rho_hat, u_hat, B_hat = a[0], a[1:3], a[3:5]

        rho_full = self.density_samples(rho_hat, t)
        inertia, k = material_coeffs(rho_full, self.params.gamma, self.params.rho_floor)
        inertia = ws.physical(ws.forward(inertia))
        k = ws.physical(ws.forward(k))
        inv_density = ws.physical(ws.forward(1.0 / (1.0 + rho_full)))

        rho = ws.physical(rho_hat)
        u1, u2 = ws.physical(u_hat)
        du = ws.physical(np.stack([ws.d1(u_hat), ws.d2(u_hat)]))

        flux = ws.spectral(np.stack([rho * u1, rho * u2]))
        F1 = -(ws.d1(flux[0]) + ws.d2(flux[1]))

        div_u = ws.d1(u_hat[0]) + ws.d2(u_hat[1])
        visc = ws.physical(
            np.stack([-grid.xi_sq * u_hat[0] + ws.d1(div_u), -grid.xi_sq * u_hat[1] + ws.d2(div_u)])
        )
        grad_rho = ws.physical(np.stack([ws.d1(rho_hat), ws.d2(rho_hat)]))
        lorentz_hat = _lorentz_array(ws, B_hat)
        lorentz = ws.physical(lorentz_hat)

        G1 = ws.spectral(
            np.stack(
                [
                    -(u1 * du[0, j] + u2 * du[1, j])
                    - inertia * visc[j]
                    - lorentz[j] * inv_density
                    + k * grad_rho[j]
                    for j in range(2)
                ]
            )
        )

        H1 = _induction_array(ws, u_hat, B_hat)
        if self.params.hall:
            H1 = H1 - _hall_array(ws, lorentz_hat, inv_density)
        H1 = project_divfree_array(grid, H1)

        return HallMhdRhs(
            F1=SpectralField(grid, F1),
            G1=VectorField.from_array(grid, G1),
            H1=VectorField.from_array(grid, H1),
        )


def nonlinear_rhs_hallmhd(state: HallMhdState) -> HallMhdRhs:
    """Nonlinear terms (F1, G1, H1) of a Hall-MHD state."""
    return HallMhdModel(state.grid, state.params).nonlinear_rhs(state)
