"""Diffusive BGK relaxation stepper for the degenerate parabolic density
equation rho_t = (P(rho)_x - chi*rho*phi_x)_x.

The numerical flux splits into a nonlinear pressure-diffusion part, a linear
artificial-viscosity part and a centered chemotactic advection part; the
relaxation parameters theta and lambda are recomputed from the current fields
every step, which keeps the monotonicity bounds valid as the solution evolves.
The hot loop (flux evaluation + the Crank-Nicolson concentration solve) is
compiled with numba so the diffusive CFL restriction stays affordable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .chemo import _cn_step, _elliptic_solve, phi_gradient
from .core import ModelParams

__all__ = [
    "BgkParameters",
    "bgk_parameters",
    "bgk_step",
    "parabolic_cfl",
    "run_parabolic_chunk",
]

LAMBDA_MIN = 1e-8
THETA2_MIN = 1e-12


@dataclass(frozen=True)
class BgkParameters:
    theta2: float  # squared relaxation speed bound
    lam: float  # kinetic velocity
    beta: float

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if self.theta2 <= 0 or self.lam <= 0:
            raise ValueError("theta2 and lambda must be positive")


def bgk_parameters(
    rho: np.ndarray,
    phi: np.ndarray,
    params: ModelParams,
    beta: float,
    dx: float,
) -> BgkParameters:
    """theta from the current max of P'(rho); lambda from the current max
    |phi_x| (centered stencil), floored when the gradient vanishes."""
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    dp_max = float(np.max(params.law.dp(rho), initial=0.0))
    theta2 = max(dp_max / (1.0 - beta), THETA2_MIN)
    grad_max = float(np.max(np.abs(phi_gradient(phi, dx)), initial=0.0))
    lam = max(params.chi * grad_max / beta, LAMBDA_MIN)
    return BgkParameters(theta2, lam, beta)


def parabolic_cfl(bgk: BgkParameters, dx: float, safety: float = 0.9) -> float:
    if not 0 < safety <= 1:
        raise ValueError("safety must lie in (0, 1]")
    return safety * min(dx / bgk.lam, dx * dx / (2.0 * bgk.theta2))


@njit(cache=True)
def _bgk_update(rho, phi, kappa, gamma, chi, lam, theta2, dt, dx):
    n = rho.shape[0]
    p = np.empty(n)
    a = np.empty(n)
    for i in range(n):
        p[i] = kappa * rho[i] ** gamma
    for i in range(n):
        left = phi[i - 1] if i > 0 else phi[0]
        right = phi[i + 1] if i < n - 1 else phi[n - 1]
        a[i] = chi * rho[i] * (right - left) / (2.0 * dx)

    c1 = 1.0 / dx - lam / (2.0 * theta2)
    flux = np.zeros(n + 1)  # walls keep zero flux
    for j in range(1, n):
        dP = p[j] - p[j - 1]
        drho = rho[j] - rho[j - 1]
        flux[j] = c1 * dP + 0.5 * lam * drho - 0.5 * (a[j - 1] + a[j])

    out = np.empty(n)
    for i in range(n):
        out[i] = rho[i] + dt / dx * (flux[i + 1] - flux[i])
        if out[i] < 0.0 and out[i] > -1e-13:
            out[i] = 0.0
    return out


def _check_d1(lam, theta2, dx):
    if 1.0 / dx - lam / (2.0 * theta2) < 0.0:
        warnings.warn(
            "pressure-diffusion coefficient 1/dx - lambda/(2 theta^2) is "
            "negative at this resolution; the update is no longer monotone",
            RuntimeWarning,
            stacklevel=3,
        )


def bgk_step(
    rho: np.ndarray,
    phi: np.ndarray,
    params: ModelParams,
    bgk: BgkParameters,
    dt: float,
    dx: float,
) -> np.ndarray:
    if dt > min(dx / bgk.lam, dx * dx / (2.0 * bgk.theta2)) * (1.0 + 1e-12):
        raise RuntimeError("dt violates the BGK CFL bound")
    _check_d1(bgk.lam, bgk.theta2, dx)
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return _bgk_update(
        rho, phi, params.kappa, params.gamma, params.chi, bgk.lam, bgk.theta2, dt, dx
    )


@njit(cache=True)
def _max_abs_grad(phi, dx):
    n = phi.shape[0]
    g = 0.0
    for i in range(n):
        left = phi[i - 1] if i > 0 else phi[0]
        right = phi[i + 1] if i < n - 1 else phi[n - 1]
        v = abs(right - left) / (2.0 * dx)
        if v > g:
            g = v
    return g


@njit(cache=True)
def _run_chunk(
    rho,
    phi,
    t,
    t_stop,
    kappa,
    gamma,
    chi,
    diff,
    prod,
    degr,
    delta,
    beta,
    safety,
    dx,
    lambda_min,
    theta2_min,
    max_steps,
):
    """Advance the coupled (density, concentration) pair until t_stop.

    Returns (rho, phi, t, nsteps, last_residual); parameters are refreshed
    from the instantaneous fields at every step.
    """
    n = rho.shape[0]
    steps = 0
    residual = 0.0
    while t < t_stop and steps < max_steps:
        dp_max = 0.0
        for i in range(n):
            v = kappa * gamma * rho[i] ** (gamma - 1.0)
            if v > dp_max:
                dp_max = v
        theta2 = dp_max / (1.0 - beta)
        if theta2 < theta2_min:
            theta2 = theta2_min
        lam = chi * _max_abs_grad(phi, dx) / beta
        if lam < lambda_min:
            lam = lambda_min
        dt = dx / lam
        dt2 = dx * dx / (2.0 * theta2)
        if dt2 < dt:
            dt = dt2
        dt *= safety
        if t + dt > t_stop:
            dt = t_stop - t

        rho_new = _bgk_update(rho, phi, kappa, gamma, chi, lam, theta2, dt, dx)
        if delta == 1:
            phi = _cn_step(phi, rho, diff, prod, degr, dt, dx)
        else:
            phi = _elliptic_solve(rho_new, diff, prod, degr, dx)

        residual = 0.0
        for i in range(n):
            d = abs(rho_new[i] - rho[i])
            if d > residual:
                residual = d
        rho = rho_new
        t += dt
        steps += 1
    return rho, phi, t, steps, residual


def run_parabolic_chunk(
    rho: np.ndarray,
    phi: np.ndarray,
    t: float,
    t_stop: float,
    params: ModelParams,
    beta: float = 0.95,
    safety: float = 0.9,
    dx: float = 1.0,
    max_steps: int = 10**9,
):
    """Python-facing wrapper around the compiled coupled time loop."""
    bgk = bgk_parameters(rho, phi, params, beta, dx)
    _check_d1(bgk.lam, bgk.theta2, dx)
    return _run_chunk(
        np.asarray(rho, dtype=float),
        np.asarray(phi, dtype=float),
        float(t),
        float(t_stop),
        params.kappa,
        params.gamma,
        params.chi,
        params.diff,
        params.prod,
        params.degr,
        params.delta,
        beta,
        safety,
        dx,
        LAMBDA_MIN,
        THETA2_MIN,
        max_steps,
    )
