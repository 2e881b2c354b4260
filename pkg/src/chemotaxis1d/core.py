"""Grids, cell fields, pressure-law algebra and global diagnostics.

Everything downstream (Riemann solvers, the well-balanced hyperbolic stepper,
the BGK parabolic stepper) works on plain numpy arrays of per-cell values;
the types here carry the geometry and the physical constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "PressureLaw",
    "ModelParams",
    "HydroState",
    "total_mass",
    "vacuum_threshold",
    "velocity_from",
]

# Relative cutoff below which a cell is treated as exact vacuum.
VACUUM_REL_EPS = 1e-13


@dataclass(frozen=True)
class Grid:
    """Uniform partition of [0, L] into n cells."""

    length: float
    n: int

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"domain length must be positive, got {self.length}")
        if self.n < 1:
            raise ValueError(f"cell count must be positive, got {self.n}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) * self.dx


@dataclass(frozen=True)
class PressureLaw:
    """Isentropic gas pressure P(rho) = kappa * rho**gamma, gamma > 1."""

    kappa: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    def _check(self, rho):
        if np.any(np.asarray(rho) < 0):
            raise ValueError("density must be non-negative")

    def p(self, rho):
        self._check(rho)
        return self.kappa * np.asarray(rho, dtype=float) ** self.gamma

    def dp(self, rho):
        """P'(rho) = kappa * gamma * rho**(gamma-1)."""
        self._check(rho)
        return self.kappa * self.gamma * np.asarray(rho, dtype=float) ** (self.gamma - 1.0)

    def sound_speed(self, rho):
        return np.sqrt(self.dp(rho))

    def psi(self, rho):
        """Enthalpy Psi(rho) = kappa*gamma/(gamma-1) * rho**(gamma-1), Psi(0) = 0."""
        self._check(rho)
        g = self.gamma
        return self.kappa * g / (g - 1.0) * np.asarray(rho, dtype=float) ** (g - 1.0)

    def p_inv(self, y):
        if np.any(np.asarray(y) < 0):
            raise ValueError("pressure must be non-negative")
        return (np.asarray(y, dtype=float) / self.kappa) ** (1.0 / self.gamma)

    def psi_inv(self, y):
        if np.any(np.asarray(y) < 0):
            raise ValueError("enthalpy must be non-negative")
        g = self.gamma
        return ((g - 1.0) * np.asarray(y, dtype=float) / (self.kappa * g)) ** (1.0 / (g - 1.0))


@dataclass(frozen=True)
class ModelParams:
    """Physical constants shared by the hyperbolic and parabolic models.

    delta selects a parabolic (1) or elliptic (0) chemoattractant equation.
    """

    kappa: float = 1.0
    gamma: float = 2.0
    chi: float = 1.0
    alpha: float = 1.0
    diff: float = 1.0  # chemoattractant diffusivity D
    prod: float = 1.0  # production rate a
    degr: float = 1.0  # degradation rate b
    delta: int = 1

    def __post_init__(self):
        for name in ("chi", "alpha", "diff", "prod", "degr"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.delta not in (0, 1):
            raise ValueError(f"delta must be 0 or 1, got {self.delta}")

    @property
    def law(self) -> PressureLaw:
        return PressureLaw(self.kappa, self.gamma)

    @property
    def omega(self) -> float:
        """Bump-existence parameter (a*chi/(2*kappa) - b) / D. May be negative."""
        return (self.prod * self.chi / (2.0 * self.kappa) - self.degr) / self.diff


def vacuum_threshold(rho: np.ndarray) -> float:
    """Density below which a cell counts as vacuum and momentum is clamped."""
    return VACUUM_REL_EPS * max(1.0, float(np.max(rho, initial=0.0)))


def velocity_from(rho: np.ndarray, mom: np.ndarray) -> np.ndarray:
    """u = mom/rho with u = 0 on (near-)vacuum cells."""
    eps = vacuum_threshold(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(rho >= eps, mom / np.where(rho >= eps, rho, 1.0), 0.0)
    return u


@dataclass
class HydroState:
    """Cell densities and momenta for the hyperbolic model."""

    rho: np.ndarray
    mom: np.ndarray

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.mom = np.asarray(self.mom, dtype=float)
        if self.rho.shape != self.mom.shape:
            raise ValueError("rho and mom must have the same shape")

    def validate(self):
        if np.any(self.rho < 0):
            raise ValueError("negative density")
        eps = vacuum_threshold(self.rho)
        bad = (self.rho < eps) & (self.mom != 0.0)
        if np.any(bad):
            raise ValueError("nonzero momentum on vacuum cells")

    def velocity(self) -> np.ndarray:
        return velocity_from(self.rho, self.mom)

    def copy(self) -> "HydroState":
        return HydroState(self.rho.copy(), self.mom.copy())


def total_mass(rho: np.ndarray, grid: Grid) -> float:
    """dx * sum(rho)."""
    if np.any(rho < 0):
        raise ValueError("negative density")
    return grid.dx * float(np.sum(rho))
