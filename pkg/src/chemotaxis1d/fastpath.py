"""Compiled coupled time loop for the hyperbolic model.

Scalar numba mirror of `hyperbolic.advance_auto` + the concentration update,
used by the harness for long runs (the vectorized numpy stepper costs a few
hundred microseconds per step; the metastability experiments need millions of
steps).  Semantics match the numpy path to rounding error; a cross-check test
keeps the two in lockstep.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .chemo import _cn_step, _elliptic_solve
from .core import ModelParams
from .hyperbolic import DampingMode, ReconstructionKind, SchemeConfig
from .riemann import FluxKind, default_alpha_s

__all__ = ["hyperbolic_chunk", "STATUS_OK", "STATUS_NEGATIVE", "STATUS_NONFINITE"]

STATUS_OK = 0
STATUS_NEGATIVE = 1
STATUS_NONFINITE = 2

_FLUX_CODE = {FluxKind.HLL: 0, FluxKind.HLL_ROE: 1, FluxKind.SULICIU: 2}
_REC_CODE = {ReconstructionKind.E: 0, ReconstructionKind.P: 1}
_DAMP_CODE = {DampingMode.EXPLICIT: 0, DampingMode.IMPLICIT: 1}


@njit(cache=True)
def _flux_scalar(code, rl, ul, rr, ur, kappa, gamma, alpha_s):
    """Returns (f_rho, f_mom, sigma) for one interface."""
    pl = kappa * rl**gamma
    pr = kappa * rr**gamma
    al = (kappa * gamma * rl ** (gamma - 1.0)) ** 0.5
    ar = (kappa * gamma * rr ** (gamma - 1.0)) ** 0.5

    if code == 2:  # Suliciu relaxation with vacuum correction
        du_pos = max(ul - ur, 0.0)
        if pr >= pl:
            zr = rr * ar
            ratio = (pr - pl) / zr if zr > 0.0 else 0.0
            cl = rl * (al + alpha_s * max(ratio + du_pos, 0.0))
            inner = (pl - pr) / cl + du_pos if cl > 0.0 else du_pos
            cr = rr * (ar + alpha_s * max(inner, 0.0))
        else:
            zl = rl * al
            ratio = (pl - pr) / zl if zl > 0.0 else 0.0
            cr = rr * (ar + alpha_s * max(ratio + du_pos, 0.0))
            inner = (pr - pl) / cr + du_pos if cr > 0.0 else du_pos
            cl = rl * (al + alpha_s * max(inner, 0.0))
        csum = cl + cr
        if csum <= 0.0:
            return 0.0, 0.0, 0.0
        ustar = (cl * ul + cr * ur + pl - pr) / csum
        pstar = (cr * pl + cl * pr - cl * cr * (ur - ul)) / csum
        if pstar < 0.0:
            pstar = 0.0
        if rl > 0.0 and cl > 0.0:
            inv_l = 1.0 / rl + (cr * (ur - ul) + pl - pr) / (cl * csum)
        else:
            inv_l = np.inf
        if rr > 0.0 and cr > 0.0:
            inv_r = 1.0 / rr + (cl * (ur - ul) + pr - pl) / (cr * csum)
        else:
            inv_r = np.inf
        rstar_l = 1.0 / inv_l if (np.isfinite(inv_l) and inv_l > 0.0) else 0.0
        rstar_r = 1.0 / inv_r if (np.isfinite(inv_r) and inv_r > 0.0) else 0.0
        s_l = ul - cl / rl if rl > 0.0 else ustar
        s_r = ur + cr / rr if rr > 0.0 else ustar
        if s_l > 0.0:
            rho_if, u_if, pi_if = rl, ul, pl
        elif s_r > 0.0:
            rho_if = rstar_l if ustar > 0.0 else rstar_r
            u_if, pi_if = ustar, pstar
        else:
            rho_if, u_if, pi_if = rr, ur, pr
        sigma = max(abs(s_l), abs(s_r))
        return rho_if * u_if, rho_if * u_if * u_if + pi_if, sigma

    # HLL family
    if code == 1:  # Einfeldt speeds on a Roe-averaged sound speed
        sl = rl**0.5
        sr = rr**0.5
        wsum = sl + sr
        if wsum < 1e-300:
            wsum = 1e-300
        cbar = ((sr * kappa * gamma * rr ** (gamma - 1.0) + sl * kappa * gamma * rl ** (gamma - 1.0)) / wsum) ** 0.5
        ubar = (sl * ul + sr * ur) / wsum
        c1 = min(min(ul - al, ubar - cbar), 0.0)
        c2 = max(max(ur + ar, ubar + cbar), 0.0)
    else:
        c1 = min(min(ul - al, ur - ar), 0.0)
        c2 = max(max(ul + al, ur + ar), 0.0)
    fl_r = rl * ul
    fl_m = rl * ul * ul + pl
    fr_r = rr * ur
    fr_m = rr * ur * ur + pr
    spread = c2 - c1
    if spread < 1e-14:
        return fl_r, fl_m, max(abs(c1), c2)
    f_rho = (c2 * fl_r - c1 * fr_r + c1 * c2 * (rr - rl)) / spread
    f_mom = (c2 * fl_m - c1 * fr_m + c1 * c2 * (rr * ur - rl * ul)) / spread
    return f_rho, f_mom, max(abs(c1), c2)


@njit(cache=True)
def _hyp_chunk(
    rho,
    mom,
    phi,
    t,
    t_stop,
    kappa,
    gamma,
    chi,
    alpha,
    diff,
    prod,
    degr,
    delta,
    flux_code,
    rec_code,
    damp_code,
    cfl_factor,
    alpha_s,
    dt_cap,
    dx,
    max_steps,
):
    """Advance until the first step whose end time reaches t_stop (the step is
    not clipped).  Returns (rho, mom, phi, t, steps, residual, status)."""
    n = rho.shape[0]
    g1 = gamma - 1.0
    inv_g = 1.0 / gamma
    inv_g1 = 1.0 / g1
    psi_c = kappa * gamma * inv_g1  # enthalpy prefactor

    rho_m = np.empty(n + 1)
    rho_p = np.empty(n + 1)
    u_m = np.empty(n + 1)
    u_p = np.empty(n + 1)
    f_rho = np.empty(n + 1)
    f_mom = np.empty(n + 1)
    steps = 0
    residual = 0.0

    while t < t_stop and steps < max_steps:
        # vacuum threshold for velocities
        rmax = 0.0
        for i in range(n):
            if rho[i] > rmax:
                rmax = rho[i]
        vac = 1e-13 * max(1.0, rmax)

        sigma_max = 0.0
        for j in range(n + 1):
            # ghosted left/right cell values (mirror rho/phi, negate u)
            if j == 0:
                rl, rr = rho[0], rho[0]
                ml, mr = -mom[0], mom[0]
                phil, phir = phi[0], phi[0]
            elif j == n:
                rl, rr = rho[n - 1], rho[n - 1]
                ml, mr = mom[n - 1], -mom[n - 1]
                phil, phir = phi[n - 1], phi[n - 1]
            else:
                rl, rr = rho[j - 1], rho[j]
                ml, mr = mom[j - 1], mom[j]
                phil, phir = phi[j - 1], phi[j]
            ul = ml / rl if rl >= vac else 0.0
            ur = mr / rr if rr >= vac else 0.0

            phimin = min(phil, phir)
            if rec_code == 0:  # enthalpy form
                lhs_m = psi_c * rl**g1 + chi * (phimin - phil)
                lhs_p = psi_c * rr**g1 + chi * (phimin - phir)
                if damp_code == 0:
                    lhs_m -= alpha * max(ul, 0.0) * dx
                    lhs_p += alpha * min(ur, 0.0) * dx
                rm = (max(lhs_m, 0.0) / psi_c) ** inv_g1
                rp = (max(lhs_p, 0.0) / psi_c) ** inv_g1
            else:  # pressure form
                rbar = 0.5 * (rl + rr)
                lhs_m = kappa * rl**gamma + chi * rbar * (phimin - phil)
                lhs_p = kappa * rr**gamma + chi * rbar * (phimin - phir)
                if damp_code == 0:
                    lhs_m -= alpha * rl * max(ul, 0.0) * dx
                    lhs_p += alpha * rr * min(ur, 0.0) * dx
                rm = (max(lhs_m, 0.0) / kappa) ** inv_g
                rp = (max(lhs_p, 0.0) / kappa) ** inv_g

            rho_m[j] = rm
            rho_p[j] = rp
            u_m[j] = ul
            u_p[j] = ur
            fr, fm, sg = _flux_scalar(flux_code, rm, ul, rp, ur, kappa, gamma, alpha_s)
            f_rho[j] = fr
            f_mom[j] = fm
            if sg > sigma_max:
                sigma_max = sg

        if sigma_max <= 0.0:
            dt = dt_cap
        else:
            dt = cfl_factor * dx / sigma_max
            if dt > dt_cap:
                dt = dt_cap
        lam = dt / dx

        rho_new = np.empty(n)
        mom_new = np.empty(n)
        floor = -1e-12 * max(1.0, rmax)
        residual = 0.0
        rmax_new = 0.0
        for i in range(n):
            rn = rho[i] - lam * (f_rho[i + 1] - f_rho[i])
            src = kappa * rho_m[i + 1] ** gamma - kappa * rho_p[i] ** gamma
            mn = mom[i] - lam * (f_mom[i + 1] - f_mom[i]) + lam * src
            if damp_code == 1:
                mn = mn / (1.0 + alpha * dt)
            if rn < floor:
                return rho, mom, phi, t, steps, residual, STATUS_NEGATIVE
            if rn < 0.0:
                rn = 0.0
            if not np.isfinite(rn):
                return rho, mom, phi, t, steps, residual, STATUS_NONFINITE
            d = abs(rn - rho[i])
            if d > residual:
                residual = d
            rho_new[i] = rn
            mom_new[i] = mn
            if rn > rmax_new:
                rmax_new = rn
        vac_new = 1e-13 * max(1.0, rmax_new)
        for i in range(n):
            if rho_new[i] < vac_new:
                mom_new[i] = 0.0

        if delta == 1:
            phi = _cn_step(phi, rho, diff, prod, degr, dt, dx)
        else:
            phi = _elliptic_solve(rho_new, diff, prod, degr, dx)
        rho = rho_new
        mom = mom_new
        t += dt
        steps += 1
    return rho, mom, phi, t, steps, residual, STATUS_OK


def hyperbolic_chunk(
    rho: np.ndarray,
    mom: np.ndarray,
    phi: np.ndarray,
    t: float,
    t_stop: float,
    params: ModelParams,
    dx: float,
    scheme: SchemeConfig = SchemeConfig(),
    max_steps: int = 10**9,
):
    """Python-facing wrapper; returns (rho, mom, phi, t, steps, residual, status)."""
    alpha_s = scheme.alpha_s if scheme.alpha_s is not None else default_alpha_s(params.law)
    dt_cap = scheme.dt_max if scheme.dt_max is not None else dx
    return _hyp_chunk(
        np.asarray(rho, dtype=float),
        np.asarray(mom, dtype=float),
        np.asarray(phi, dtype=float),
        float(t),
        float(t_stop),
        params.kappa,
        params.gamma,
        params.chi,
        params.alpha,
        params.diff,
        params.prod,
        params.degr,
        params.delta,
        _FLUX_CODE[scheme.flux],
        _REC_CODE[scheme.reconstruction],
        _DAMP_CODE[scheme.damping],
        scheme.cfl_factor,
        alpha_s,
        dt_cap,
        dx,
        max_steps,
    )
