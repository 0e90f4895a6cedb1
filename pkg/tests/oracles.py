"""Brute-force reference computations used by the tests.

Everything here is written independently of the package kernels: products
are direct convolutions over integer mode pairs, derivatives use their own
wavenumbers and the matrix exponential is a scaled Taylor series.
"""

import math

import numpy as np

from odhall.domain.entities import (
    Grid,
    state_type,
)


class DirectConvolution:
    """Alias-free (1/L) f_hat * g_hat restricted to |k1|, |k2| <= (n-1)//3."""

    def __init__(self, grid: Grid):
        n = grid.n
        cutoff = (n - 1) // 3
        modes = np.fft.fftfreq(n, d=1.0 / n).round().astype(int)
        k1, k2 = np.meshgrid(modes, modes, indexing="ij")
        keep = np.flatnonzero((np.abs(k1) <= cutoff) & (np.abs(k2) <= cutoff))
        a1, a2 = k1.ravel()[keep], k2.ravel()[keep]
        s1 = a1[:, None] + a1[None, :]
        s2 = a2[:, None] + a2[None, :]
        valid = (np.abs(s1) <= cutoff) & (np.abs(s2) <= cutoff)
        p, q = np.nonzero(valid)
        self.n = n
        self.box_length = grid.box_length
        self.left = keep[p]
        self.right = keep[q]
        self.target = (s1[valid] % n) * n + (s2[valid] % n)
        self.keep = keep

    def __call__(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n * self.n, dtype=np.complex128)
        np.add.at(out, self.target, f.ravel()[self.left] * g.ravel()[self.right])
        return out.reshape(self.n, self.n) / self.box_length

    def truncate(self, f: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n * self.n, dtype=np.complex128)
        out[self.keep] = f.ravel()[self.keep]
        return out.reshape(self.n, self.n)


def wavenumbers(grid: Grid):
    modes = np.fft.fftfreq(grid.n, d=1.0 / grid.n)
    xi = 2.0 * math.pi / grid.box_length * modes
    return np.meshgrid(xi, xi, indexing="ij")


def to_physical(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    return (grid.n**2 / grid.box_length) * np.fft.ifft2(coeffs).real


def to_spectral(grid: Grid, values: np.ndarray) -> np.ndarray:
    return (grid.box_length / grid.n**2) * np.fft.fft2(values)


def random_coeffs(grid: Grid, rng: np.random.Generator, count: int, amplitude: float) -> np.ndarray:
    """Retained-mode coefficients of real fields with max |value| = amplitude."""
    cutoff = (grid.n - 1) // 3
    modes = np.fft.fftfreq(grid.n, d=1.0 / grid.n)
    k1, k2 = np.meshgrid(modes, modes, indexing="ij")
    mask = (np.abs(k1) <= cutoff) & (np.abs(k2) <= cutoff)
    out = np.empty((count, grid.n, grid.n), dtype=np.complex128)
    for i in range(count):
        coeffs = np.where(mask, to_spectral(grid, rng.standard_normal(grid.shape)), 0.0)
        coeffs[0, 0] = 0.0
        peak = np.max(np.abs(to_physical(grid, coeffs)))
        out[i] = amplitude * coeffs / peak
    return out


def random_state(kind, grid: Grid, rng: np.random.Generator, params, amplitude: float = 0.1):
    cls = state_type(kind)
    array = random_coeffs(grid, rng, len(cls.FIELD_NAMES), amplitude)
    return cls.from_array(grid, array, params)


def leray(grid: Grid, V: np.ndarray) -> np.ndarray:
    x1, x2 = wavenumbers(grid)
    sq = x1**2 + x2**2
    sq[0, 0] = 1.0
    along = (x1 * V[0] + x2 * V[1]) / sq
    return np.stack([V[0] - x1 * along, V[1] - x2 * along])


def _material(grid: Grid, rho_hat: np.ndarray, gamma: float, conv: DirectConvolution):
    rho = to_physical(grid, rho_hat)
    density = 1.0 + rho
    inertia = conv.truncate(to_spectral(grid, rho / density))
    k = conv.truncate(to_spectral(grid, gamma * (1.0 - density ** (gamma - 2.0))))
    inv = conv.truncate(to_spectral(grid, 1.0 / density))
    return inertia, k, inv


def oldroyd_rhs_oracle(state, conv: DirectConvolution) -> np.ndarray:
    """(F, G, H) by direct convolution."""
    grid = state.grid
    x1, x2 = wavenumbers(grid)
    d = (1j * x1, 1j * x2)
    a = state.to_array()
    rho, u, tau = a[0], a[1:3], a[3:6]
    inertia, k, _ = _material(grid, rho, state.params.gamma, conv)
    b = state.params.b

    F = -sum(d[j] * conv(rho, u[j]) for j in range(2))

    grad_u = [[d[j] * u[i] for j in range(2)] for i in range(2)]
    div_u = grad_u[0][0] + grad_u[1][1]
    sq = x1**2 + x2**2
    full_tau = [[tau[0], tau[1]], [tau[1], tau[2]]]
    G = []
    for i in range(2):
        visc = -sq * u[i] + d[i] * div_u
        div_tau = d[0] * full_tau[i][0] + d[1] * full_tau[i][1]
        G.append(
            -sum(conv(u[j], grad_u[i][j]) for j in range(2))
            - 0.5 * conv(inertia, visc)
            - conv(inertia, div_tau)
            + conv(k, d[i] * rho)
        )

    # tau W - W tau + b (D tau + tau D), matrices of coefficient products
    m = grad_u
    W = [[0.5 * (m[i][j] - m[j][i]) for j in range(2)] for i in range(2)]
    D = [[0.5 * (m[i][j] + m[j][i]) for j in range(2)] for i in range(2)]

    def matmul(P, Q, i, j):
        return sum(conv(P[i][l], Q[l][j]) for l in range(2))

    H = []
    for i, j in ((0, 0), (0, 1), (1, 1)):
        g = matmul(full_tau, W, i, j) - matmul(W, full_tau, i, j)
        g = g + b * (matmul(D, full_tau, i, j) + matmul(full_tau, D, i, j))
        advect = sum(conv(u[l], d[l] * full_tau[i][j]) for l in range(2))
        H.append(-advect - g)
    return np.stack([F, *G, *H])


def hallmhd_rhs_oracle(state, conv: DirectConvolution) -> np.ndarray:
    """(F1, G1, H1) by direct convolution; the induction term uses the curl form."""
    grid = state.grid
    x1, x2 = wavenumbers(grid)
    d = (1j * x1, 1j * x2)
    a = state.to_array()
    rho, u, B = a[0], a[1:3], a[3:5]
    inertia, k, inv = _material(grid, rho, state.params.gamma, conv)

    F1 = -sum(d[j] * conv(rho, u[j]) for j in range(2))

    omega = d[0] * B[1] - d[1] * B[0]
    lorentz = [-conv(omega, B[1]), conv(omega, B[0])]
    div_u = d[0] * u[0] + d[1] * u[1]
    sq = x1**2 + x2**2
    G1 = []
    for i in range(2):
        visc = -sq * u[i] + d[i] * div_u
        G1.append(
            -sum(conv(u[j], d[j] * u[i]) for j in range(2))
            - conv(inertia, visc)
            - conv(lorentz[i], inv)
            + conv(k, d[i] * rho)
        )

    psi = conv(u[0], B[1]) - conv(u[1], B[0])
    H1 = np.stack([d[1] * psi, -d[0] * psi])
    if state.params.hall:
        scaled = [conv(lorentz[0], inv), conv(lorentz[1], inv)]
        h = d[0] * scaled[1] - d[1] * scaled[0]
        H1 = H1 - np.stack([d[1] * h, -d[0] * h])
    return np.stack([F1, *G1, *leray(grid, H1)])


def taylor_expm(A: np.ndarray, terms: int = 60) -> np.ndarray:
    """exp(A) by scaling, a truncated Taylor series and repeated squaring."""
    norm = np.linalg.norm(A, ord=1)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    scaled = A / 2.0**squarings
    result = np.eye(A.shape[0], dtype=np.complex128)
    term = np.eye(A.shape[0], dtype=np.complex128)
    for k in range(1, terms):
        term = term @ scaled / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = np.linalg.norm(expected)
    return float(np.linalg.norm(actual - expected) / (scale if scale > 0 else 1.0))
