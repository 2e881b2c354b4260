"""Closed-form stationary solutions for gamma = 2: constant state, lateral
half bump with a vacuum region, central bump, and concatenations of bumps on
subintervals (used as initial data for the model-comparison experiments).

On the support the density is an affine function of the concentration,
rho = chi/(2*kappa) * phi + K; the free boundary xbar of a half bump solves a
transcendental matching condition and is found by bracketed bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .core import Grid, ModelParams

__all__ = [
    "NoBumpError",
    "Orientation",
    "StationaryProfile",
    "constant_state",
    "solve_xbar",
    "xbar_residual",
    "half_bump",
    "central_bump",
    "concatenate",
]


class NoBumpError(ValueError):
    """Raised when the requested bump solution does not exist."""


class Orientation(Enum):
    LEFT = "left"
    RIGHT = "right"
    CENTERED = "centered"


@dataclass
class StationaryProfile:
    length: float
    mass: float
    params: ModelParams
    rho_fn: Callable[[np.ndarray], np.ndarray]
    phi_fn: Callable[[np.ndarray], np.ndarray]
    xbar: float | None  # free boundary (distance from the anchored wall)
    K: float | None
    orientation: Orientation

    def sample(self, grid: Grid):
        x = grid.centers
        return self.rho_fn(x), self.phi_fn(x)


def constant_state(length: float, mass: float, params: ModelParams) -> StationaryProfile:
    if length <= 0 or mass <= 0:
        raise ValueError("length and mass must be positive")
    rho0 = mass / length
    phi0 = params.prod * mass / (params.degr * length)
    return StationaryProfile(
        length,
        mass,
        params,
        rho_fn=lambda x: np.full_like(np.asarray(x, dtype=float), rho0),
        phi_fn=lambda x: np.full_like(np.asarray(x, dtype=float), phi0),
        xbar=None,
        K=None,
        orientation=Orientation.CENTERED,
    )


def xbar_residual(x: float, params: ModelParams, length: float) -> float:
    """sqrt(b/(omega*D)) tan(sqrt(omega) x) - tanh(sqrt(b/D) (x - L))."""
    w = params.omega
    lhs = math.sqrt(params.degr / (w * params.diff)) * math.tan(math.sqrt(w) * x)
    rhs = math.tanh(math.sqrt(params.degr / params.diff) * (x - length))
    return lhs - rhs


def solve_xbar(params: ModelParams, length: float, tol: float = 1e-15) -> float:
    """Unique root of the free-boundary equation in (pi/2, pi)/sqrt(omega)."""
    w = params.omega
    if w <= 0:
        raise NoBumpError(f"omega = {w:.4g} <= 0: no half bump exists")
    sw = math.sqrt(w)
    if length <= math.pi / sw:
        raise NoBumpError(
            f"domain too short for a half bump: L = {length:.4g} <= pi/sqrt(omega) = {math.pi / sw:.4g}"
        )
    # offset keeps the tan pole at pi/(2 sqrt(omega)) out of the bracket
    off = 1e-12 * (math.pi / (2.0 * sw))
    lo = math.pi / (2.0 * sw) + off
    hi = math.pi / sw - off
    flo = xbar_residual(lo, params, length)
    fhi = xbar_residual(hi, params, length)
    if flo * fhi > 0:
        raise NoBumpError("no sign change across the bracket (pi/2, pi)/sqrt(omega)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = xbar_residual(mid, params, length)
        if fmid == 0.0 or hi - lo < tol * hi:
            return mid
        if flo * fmid < 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _half_bump_callables(length, mass, params, xbar):
    w = params.omega
    sw = math.sqrt(w)
    sbd = math.sqrt(params.degr / params.diff)
    K = (params.diff / params.degr) * mass * w * sw / (math.tan(sw * xbar) - sw * xbar)
    two_kappa = 2.0 * params.kappa
    cos_xbar = math.cos(sw * xbar)
    cosh_xbar = math.cosh(sbd * (xbar - length))

    def phi_fn(x):
        x = np.asarray(x, dtype=float)
        on = x <= xbar
        phi_on = (
            two_kappa * params.degr * K / (w * params.chi * params.diff)
            * np.cos(sw * x) / cos_xbar
            - params.prod * K / (w * params.diff)
        )
        phi_off = -two_kappa * K / params.chi * np.cosh(sbd * (x - length)) / cosh_xbar
        return np.where(on, phi_on, phi_off)

    def rho_fn(x):
        x = np.asarray(x, dtype=float)
        on = x <= xbar
        rho_on = params.chi / two_kappa * phi_fn(x) + K
        return np.where(on, np.maximum(rho_on, 0.0), 0.0)

    return rho_fn, phi_fn, K


def half_bump(
    length: float,
    mass: float,
    params: ModelParams,
    orientation: Orientation = Orientation.LEFT,
) -> StationaryProfile:
    """Lateral half bump of mass `mass`, anchored at x=0 (LEFT) or x=L (RIGHT)."""
    if orientation is Orientation.CENTERED:
        raise ValueError("use central_bump for a centered profile")
    xbar = solve_xbar(params, length)
    rho_fn, phi_fn, K = _half_bump_callables(length, mass, params, xbar)
    if orientation is Orientation.RIGHT:
        base_rho, base_phi = rho_fn, phi_fn
        rho_fn = lambda x: base_rho(length - np.asarray(x, dtype=float))
        phi_fn = lambda x: base_phi(length - np.asarray(x, dtype=float))
    return StationaryProfile(length, mass, params, rho_fn, phi_fn, xbar, K, orientation)


def central_bump(length: float, mass: float, params: ModelParams) -> StationaryProfile:
    """Symmetric interior bump: two half bumps of mass M/2 on [0, L/2] glued
    back to back at the midpoint."""
    w = params.omega
    if w <= 0 or length <= 2.0 * math.pi / math.sqrt(w):
        raise NoBumpError("domain too short for a central bump: need L > 2*pi/sqrt(omega)")
    half = half_bump(length / 2.0, mass / 2.0, params, Orientation.LEFT)
    mid = length / 2.0

    def rho_fn(x):
        return half.rho_fn(np.abs(np.asarray(x, dtype=float) - mid))

    def phi_fn(x):
        return half.phi_fn(np.abs(np.asarray(x, dtype=float) - mid))

    return StationaryProfile(
        length, mass, params, rho_fn, phi_fn, half.xbar, half.K, Orientation.CENTERED
    )


def concatenate(
    pieces: Sequence[tuple[StationaryProfile, tuple[float, float]]],
    grid: Grid,
):
    """Assemble profiles on disjoint subintervals of [0, L]; zero fill outside.

    Returns sampled (rho, phi) cell fields.  The assembled phi is not a global
    steady concentration; the pair is meant as an initial datum.
    """
    spans = sorted(span for _, span in pieces)
    for (a0, b0), (a1, _) in zip(spans, spans[1:]):
        if a1 < b0 - 1e-12:
            raise ValueError(f"overlapping subintervals: [{a0}, {b0}] and starting {a1}")
    x = grid.centers
    rho = np.zeros(grid.n)
    phi = np.zeros(grid.n)
    for profile, (a, b) in pieces:
        if b - a <= 0:
            raise ValueError("empty subinterval")
        if abs((b - a) - profile.length) > 1e-9 * profile.length:
            raise ValueError("subinterval length does not match the profile domain")
        mask = (x >= a) & (x < b)
        rho[mask] = profile.rho_fn(x[mask] - a)
        phi[mask] = profile.phi_fn(x[mask] - a)
    return rho, phi
