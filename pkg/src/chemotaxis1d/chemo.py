"""Linear chemoattractant equation: Crank-Nicolson stepper and steady
elliptic solver, both with Neumann (mirror) boundary cells.

The tridiagonal systems are solved with a Thomas recurrence compiled by
numba; the same kernel is reused by the parabolic density stepper.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .core import ModelParams

__all__ = ["chemo_step_cn", "chemo_solve_elliptic", "phi_gradient", "thomas_solve"]


@njit(cache=True)
def thomas_solve(sub, diag, sup, rhs):
    """Solve a tridiagonal system in place-free form. Diagonally dominant input."""
    n = diag.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        m = diag[i] - sub[i] * cp[i - 1]
        cp[i] = sup[i] / m
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / m
    x = np.empty(n)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@njit(cache=True)
def _cn_step(phi, rho, diff, prod, degr, dt, dx):
    """(I - dt/2 A) phi_new = (I + dt/2 A) phi + dt * prod * rho,
    A = (diff/dx^2) * Laplacian_Neumann - degr * I."""
    n = phi.shape[0]
    mu = diff * dt / (2.0 * dx * dx)
    bd = degr * dt / 2.0

    rhs = np.empty(n)
    for i in range(n):
        left = phi[i - 1] if i > 0 else phi[0]
        right = phi[i + 1] if i < n - 1 else phi[n - 1]
        lap = left - 2.0 * phi[i] + right
        rhs[i] = phi[i] + mu * lap - bd * phi[i] + dt * prod * rho[i]

    sub = np.full(n, -mu)
    sup = np.full(n, -mu)
    diag = np.full(n, 1.0 + 2.0 * mu + bd)
    # mirror ghost folds the off-diagonal entry back onto the diagonal
    diag[0] = 1.0 + mu + bd
    diag[n - 1] = 1.0 + mu + bd
    sub[0] = 0.0
    sup[n - 1] = 0.0
    return thomas_solve(sub, diag, sup, rhs)


@njit(cache=True)
def _elliptic_solve(rho, diff, prod, degr, dx):
    """degr*phi - diff*phi_xx = prod*rho with Neumann walls."""
    n = rho.shape[0]
    mu = diff / (dx * dx)
    sub = np.full(n, -mu)
    sup = np.full(n, -mu)
    diag = np.full(n, degr + 2.0 * mu)
    diag[0] = degr + mu
    diag[n - 1] = degr + mu
    sub[0] = 0.0
    sup[n - 1] = 0.0
    rhs = prod * rho
    return thomas_solve(sub, diag, sup, rhs)


def chemo_step_cn(phi: np.ndarray, rho: np.ndarray, params: ModelParams, dt: float, dx: float) -> np.ndarray:
    if dt <= 0:
        raise ValueError("dt must be positive")
    phi = np.asarray(phi, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if phi.shape != rho.shape:
        raise ValueError("phi and rho must share the grid")
    return _cn_step(phi, rho, params.diff, params.prod, params.degr, dt, dx)


def chemo_solve_elliptic(rho: np.ndarray, params: ModelParams, dx: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    return _elliptic_solve(rho, params.diff, params.prod, params.degr, dx)


def phi_gradient(phi: np.ndarray, dx: float) -> np.ndarray:
    """Centered differences with mirror ghosts (zero slope at the walls)."""
    phi = np.asarray(phi, dtype=float)
    if phi.size < 2:
        raise ValueError("need at least two cells")
    ext = np.concatenate(([phi[0]], phi, [phi[-1]]))
    return (ext[2:] - ext[:-2]) / (2.0 * dx)
