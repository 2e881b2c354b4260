"""Well-balanced finite-volume stepper for the damped Euler system with
chemotactic forcing.

The source term is upwinded at the interfaces: interface densities are
reconstructed by integrating the local equilibrium relation either in
enthalpy form (E) or pressure form (P), and the momentum source is the
difference of the reconstructed interface pressures.  Flux differences then
cancel the source exactly on discrete steady states with zero velocity.

The damping term is either folded into the reconstruction (explicit) or
applied as a 1/(1 + alpha*dt) relaxation of the updated momentum (implicit).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import HydroState, ModelParams, vacuum_threshold, velocity_from
from .riemann import FluxKind, numerical_flux

__all__ = [
    "ReconstructionKind",
    "DampingMode",
    "SchemeConfig",
    "InterfaceStates",
    "CflError",
    "reconstruct",
    "upwinded_source",
    "hyperbolic_step",
    "advance_auto",
    "cfl_dt",
]


class ReconstructionKind(Enum):
    E = "e"
    P = "p"


class DampingMode(Enum):
    EXPLICIT = "explicit"  # damping inside the reconstructed interface densities
    IMPLICIT = "implicit"  # damping as an implicit momentum relaxation


@dataclass(frozen=True)
class SchemeConfig:
    flux: FluxKind = FluxKind.SULICIU
    reconstruction: ReconstructionKind = ReconstructionKind.P
    damping: DampingMode = DampingMode.IMPLICIT
    cfl_factor: float = 0.5
    alpha_s: float | None = None  # Suliciu speed correction, default (gamma+1)/2
    dt_max: float | None = None  # fallback step at global rest; default dx

    def __post_init__(self):
        if not 0 < self.cfl_factor <= 1:
            raise ValueError("cfl_factor must lie in (0, 1]")


@dataclass
class InterfaceStates:
    """Reconstructed states at the N+1 interfaces (walls included)."""

    rho_m: np.ndarray
    u_m: np.ndarray
    rho_p: np.ndarray
    u_p: np.ndarray


class CflError(RuntimeError):
    pass


def _ghosted(state: HydroState, phi: np.ndarray):
    """Mirror density and phi, negate velocity: discrete no-flux walls."""
    rho = state.rho
    u = state.velocity()
    rho_e = np.concatenate(([rho[0]], rho, [rho[-1]]))
    u_e = np.concatenate(([-u[0]], u, [-u[-1]]))
    phi_e = np.concatenate(([phi[0]], phi, [phi[-1]]))
    return rho_e, u_e, phi_e


def reconstruct(
    state: HydroState,
    phi: np.ndarray,
    params: ModelParams,
    dx: float,
    kind: ReconstructionKind,
    mode: DampingMode,
) -> InterfaceStates:
    law = params.law
    rho_e, u_e, phi_e = _ghosted(state, phi)
    rl = rho_e[:-1]
    rr = rho_e[1:]
    ul = u_e[:-1]
    ur = u_e[1:]
    phi_min = np.minimum(phi_e[:-1], phi_e[1:])
    dphi_l = phi_min - phi_e[:-1]
    dphi_r = phi_min - phi_e[1:]

    explicit = mode is DampingMode.EXPLICIT
    if kind is ReconstructionKind.E:
        lhs_m = law.psi(rl) + params.chi * dphi_l
        lhs_p = law.psi(rr) + params.chi * dphi_r
        if explicit:
            lhs_m = lhs_m - params.alpha * np.maximum(ul, 0.0) * dx
            lhs_p = lhs_p + params.alpha * np.minimum(ur, 0.0) * dx
        rho_m = law.psi_inv(np.maximum(lhs_m, 0.0))
        rho_p = law.psi_inv(np.maximum(lhs_p, 0.0))
    else:
        rbar = 0.5 * (rl + rr)
        lhs_m = law.p(rl) + params.chi * rbar * dphi_l
        lhs_p = law.p(rr) + params.chi * rbar * dphi_r
        if explicit:
            lhs_m = lhs_m - params.alpha * rl * np.maximum(ul, 0.0) * dx
            lhs_p = lhs_p + params.alpha * rr * np.minimum(ur, 0.0) * dx
        rho_m = law.p_inv(np.maximum(lhs_m, 0.0))
        rho_p = law.p_inv(np.maximum(lhs_p, 0.0))

    return InterfaceStates(rho_m, ul.copy(), rho_p, ur.copy())


def upwinded_source(iface: InterfaceStates, params: ModelParams) -> np.ndarray:
    """Net momentum source per cell: P(rho^-_{i+1/2}) - P(rho^+_{i-1/2})."""
    law = params.law
    return law.p(iface.rho_m[1:]) - law.p(iface.rho_p[:-1])


def _fluxes(iface: InterfaceStates, params: ModelParams, scheme: SchemeConfig):
    fv = numerical_flux(
        scheme.flux,
        iface.rho_m,
        iface.u_m,
        iface.rho_p,
        iface.u_p,
        params.law,
        scheme.alpha_s,
    )
    sigma_max = float(np.max(fv.sigma)) if fv.sigma.size else 0.0
    return fv, sigma_max


def _apply_update(
    state: HydroState,
    iface: InterfaceStates,
    fv,
    params: ModelParams,
    dt: float,
    dx: float,
    scheme: SchemeConfig,
) -> HydroState:
    lam = dt / dx
    rho_new = state.rho - lam * (fv.f_rho[1:] - fv.f_rho[:-1])
    src = upwinded_source(iface, params)
    mom_new = state.mom - lam * (fv.f_mom[1:] - fv.f_mom[:-1]) + lam * src
    if scheme.damping is DampingMode.IMPLICIT:
        mom_new = mom_new / (1.0 + params.alpha * dt)

    floor = -1e-12 * max(1.0, float(np.max(state.rho, initial=0.0)))
    if np.any(rho_new < floor):
        raise CflError("density became negative; time step too large")
    rho_new = np.maximum(rho_new, 0.0)
    mom_new = np.where(rho_new < vacuum_threshold(rho_new), 0.0, mom_new)
    return HydroState(rho_new, mom_new)


def hyperbolic_step(
    state: HydroState,
    phi: np.ndarray,
    params: ModelParams,
    dt: float,
    dx: float,
    scheme: SchemeConfig = SchemeConfig(),
) -> HydroState:
    """One forward-Euler step with a caller-chosen dt (rejected if it
    violates sigma*dt <= dx)."""
    iface = reconstruct(state, phi, params, dx, scheme.reconstruction, scheme.damping)
    fv, sigma_max = _fluxes(iface, params, scheme)
    if sigma_max * dt > dx * (1.0 + 1e-12):
        raise CflError(f"sigma*dt = {sigma_max * dt:.3e} exceeds dx = {dx:.3e}")
    return _apply_update(state, iface, fv, params, dt, dx, scheme)


def cfl_dt(sigma_max: float, dx: float, cfl_factor: float, dt_max: float) -> float:
    if not 0 < cfl_factor <= 1:
        raise ValueError("cfl_factor must lie in (0, 1]")
    if sigma_max <= 0.0:
        return dt_max
    return min(cfl_factor * dx / sigma_max, dt_max)


def advance_auto(
    state: HydroState,
    phi: np.ndarray,
    params: ModelParams,
    dx: float,
    scheme: SchemeConfig = SchemeConfig(),
):
    """Single step with the CFL-chosen dt; one flux evaluation per interface.

    Returns (new_state, dt).
    """
    iface = reconstruct(state, phi, params, dx, scheme.reconstruction, scheme.damping)
    fv, sigma_max = _fluxes(iface, params, scheme)
    dt_cap = scheme.dt_max if scheme.dt_max is not None else dx
    dt = cfl_dt(sigma_max, dx, scheme.cfl_factor, dt_cap)
    new_state = _apply_update(state, iface, fv, params, dt, dx, scheme)
    return new_state, dt
