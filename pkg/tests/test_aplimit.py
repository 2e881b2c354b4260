import numpy as np
import pytest

from chemotaxis1d.aplimit import RescaledState, ap_flux_probe, rescaled_step
from chemotaxis1d.core import ModelParams
from chemotaxis1d.hyperbolic import ReconstructionKind

PARAMS = ModelParams(kappa=1.0, gamma=2.0, chi=50.0)


def r_profile(x):
    return 2.0 + 0.5 * np.sin(2.0 * np.pi * x)


def phi_profile(x):
    return x + 0.1 * np.cos(2.0 * np.pi * x)


class TestFluxProbe:
    def test_conservative_error_decays_for_p_kind(self):
        eps = [1e-2, 1e-3, 1e-4]
        entries = ap_flux_probe(r_profile, phi_profile, PARAMS, eps, ReconstructionKind.P)
        for a, b in zip(entries, entries[1:]):
            ratio = a.err_vs_conservative / b.err_vs_conservative
            assert 5.0 <= ratio <= 20.0

    def test_e_kind_error_sits_above_reference_gap(self):
        eps = [1e-2, 1e-3, 1e-4]
        entries = ap_flux_probe(r_profile, phi_profile, PARAMS, eps, ReconstructionKind.E)
        for e in entries:
            assert e.reference_gap > 0.0
            assert e.err_vs_conservative >= e.reference_gap

    def test_mesh_follows_eps(self):
        entries = ap_flux_probe(r_profile, phi_profile, PARAMS, [1e-1, 1e-3], ReconstructionKind.P)
        assert entries[0].dx <= 1e-2 + 1e-15
        assert entries[1].dx <= 1e-3 + 1e-15

    def test_sign_changing_profiles_rejected(self):
        # phi = cos gives a Darcy velocity that changes sign
        entries = lambda: ap_flux_probe(
            lambda x: 2.0 + 0.1 * np.sin(2.0 * np.pi * x),
            lambda x: np.cos(2.0 * np.pi * x),
            ModelParams(kappa=1.0, gamma=2.0, chi=1.0),
            [1e-2],
            ReconstructionKind.P,
        )
        with pytest.raises(ValueError):
            entries()


class TestRescaledStep:
    def test_mass_conserved_and_tau_scaling(self):
        n = 80
        dx = 1.0 / n
        x = (np.arange(n) + 0.5) * dx
        rho = 1.0 + 0.3 * np.sin(2.0 * np.pi * x)
        phi = 0.5 * x
        rs = RescaledState(eps=1e-3, tau=0.0, rho=rho.copy(), v=np.zeros(n), phi=phi)
        out, dtau = rescaled_step(rs, PARAMS, dx)
        assert dtau > 0.0
        assert out.tau == pytest.approx(dtau)
        assert out.rho.sum() == pytest.approx(rho.sum(), rel=1e-12)

    def test_smaller_eps_means_smaller_tau_step(self):
        n = 40
        dx = 1.0 / n
        rho = np.full(n, 2.0)
        phi = np.zeros(n)
        taus = []
        for eps in (1e-2, 1e-3):
            rs = RescaledState(eps=eps, tau=0.0, rho=rho.copy(), v=np.zeros(n), phi=phi)
            _, dtau = rescaled_step(rs, PARAMS, dx)
            taus.append(dtau)
        assert taus[1] < taus[0]

    def test_eps_validation(self):
        with pytest.raises(ValueError):
            RescaledState(eps=0.0, tau=0.0, rho=np.ones(4), v=np.zeros(4), phi=np.zeros(4))
