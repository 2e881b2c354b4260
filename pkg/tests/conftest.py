import numpy as np
import pytest

from chemotaxis1d.core import ModelParams


def discrete_equilibrium_gamma2(phi: np.ndarray, params: ModelParams, rho0: float) -> np.ndarray:
    """Zero-velocity discrete steady state for gamma = 2.

    With P = kappa*rho^2 the interface balance
    P(rho_{i+1}) - P(rho_i) = chi * (rho_i + rho_{i+1})/2 * (phi_{i+1} - phi_i)
    reduces to rho_{i+1} - rho_i = chi/(2 kappa) * (phi_{i+1} - phi_i); the
    same increment also satisfies the enthalpy-form balance (Psi is linear in
    rho), so one state covers both reconstruction kinds.
    """
    assert params.gamma == 2.0
    rho = rho0 + params.chi / (2.0 * params.kappa) * (phi - phi[0])
    if np.any(rho <= 0):
        raise ValueError("choose rho0 large enough to stay positive")
    return rho


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
