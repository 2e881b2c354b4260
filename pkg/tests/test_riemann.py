"""Flux oracles: the zero-velocity closed forms of the three solvers are
reimplemented here independently (scalar, straight from the formulas) and the
vectorized solvers must match them."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chemotaxis1d.core import PressureLaw
from chemotaxis1d.riemann import (
    FluxKind,
    default_alpha_s,
    hll_flux,
    hll_roe_flux,
    numerical_flux,
    strong_consistency_probe,
    suliciu_vacuum_flux,
)

LAW2 = PressureLaw(kappa=1.0, gamma=2.0)

densities = st.floats(min_value=1e-6, max_value=10.0)
speeds = st.floats(min_value=-5.0, max_value=5.0)


# ---------------------------------------------------------------------------
# independent zero-velocity oracles


def oracle_hll_rest(r, R, law):
    return 0.5 * (law.p(r) + law.p(R))


def oracle_hll_roe_rest(r, R, law):
    cbar = np.sqrt(
        (np.sqrt(R) * law.dp(R) + np.sqrt(r) * law.dp(r)) / (np.sqrt(r) + np.sqrt(R))
    )
    c1 = -max(np.sqrt(law.dp(r)), cbar)
    c2 = max(np.sqrt(law.dp(R)), cbar)
    return (c2 * law.p(r) - c1 * law.p(R)) / (c2 - c1)


def oracle_suliciu_rest(r, R, law, alpha_s):
    """Star-state flux of the relaxation solver at u_L = u_R = 0, 0 < r < R:
    c1 = r sqrt(P'(r)) + alpha_s r (P(R)-P(r))/(R sqrt(P'(R))), c2 = R sqrt(P'(R));
    the interface sits inside the fan so the flux is that of the slower-side
    star state."""
    assert 0 < r < R
    c2 = R * np.sqrt(law.dp(R))
    c1 = r * np.sqrt(law.dp(r)) + alpha_s * r * (law.p(R) - law.p(r)) / c2
    csum = c1 + c2
    ustar = (law.p(r) - law.p(R)) / csum
    pistar = (c2 * law.p(r) + c1 * law.p(R)) / csum
    inv_rstar_r = 1.0 / R + (law.p(R) - law.p(r)) / (c2 * csum)
    rstar_r = 1.0 / inv_rstar_r  # ustar < 0: the x/t = 0 ray sees the right star
    return rstar_r * ustar, rstar_r * ustar**2 + pistar


# ---------------------------------------------------------------------------


class TestHll:
    def test_rest_is_pressure_mean_exact(self):
        grid = np.linspace(0.05, 8.0, 50)
        r, R = np.meshgrid(grid, grid, indexing="ij")
        fv = hll_flux(r, 0.0, R, 0.0, LAW2)
        expect = 0.5 * (LAW2.p(r) + LAW2.p(R))
        assert np.max(np.abs(fv.f_mom - expect)) <= 1e-14 * np.max(expect)

    def test_worked_example(self):
        fv = hll_flux(1.0, 0.0, 4.0, 0.0, LAW2)
        assert fv.f_mom == pytest.approx(8.5, abs=1e-14)

    def test_both_vacuum(self):
        fv = hll_flux(0.0, 0.0, 0.0, 0.0, LAW2)
        assert fv.f_rho == 0.0 and fv.f_mom == 0.0


class TestHllRoe:
    def test_worked_example(self):
        # c_bar = sqrt((2*8 + 1*2)/3) = sqrt(6)
        fv = hll_roe_flux(1.0, 0.0, 4.0, 0.0, LAW2)
        expect = (np.sqrt(8.0) * 1.0 + np.sqrt(6.0) * 16.0) / (np.sqrt(8.0) + np.sqrt(6.0))
        assert expect == pytest.approx(7.9619, abs=1e-3)
        assert fv.f_mom == pytest.approx(expect, rel=1e-13)

    def test_rest_closed_form_grid(self):
        grid = np.geomspace(1e-2, 8.0, 50)
        for r in grid[::7]:
            for R in grid[::7]:
                if abs(r - R) < 1e-12:
                    continue
                fv = hll_roe_flux(r, 0.0, R, 0.0, LAW2)
                assert fv.f_mom == pytest.approx(
                    oracle_hll_roe_rest(r, R, LAW2), rel=1e-12
                )

    def test_rest_symmetry(self):
        a = hll_roe_flux(0.3, 0.0, 2.0, 0.0, LAW2)
        b = hll_roe_flux(2.0, 0.0, 0.3, 0.0, LAW2)
        assert a.f_mom == pytest.approx(b.f_mom, rel=1e-13)
        assert a.f_rho == pytest.approx(-b.f_rho, rel=1e-13)


class TestSuliciu:
    def test_rest_closed_form_example(self):
        r, R, alpha_s = 1.0, 4.0, 1.5
        fv = suliciu_vacuum_flux(r, 0.0, R, 0.0, LAW2, alpha_s=alpha_s)
        f_rho, f_mom = oracle_suliciu_rest(r, R, LAW2, alpha_s)
        assert fv.f_rho == pytest.approx(f_rho, rel=1e-12)
        assert fv.f_mom == pytest.approx(f_mom, rel=1e-12)

    def test_rest_closed_form_grid(self):
        law = PressureLaw(kappa=0.8, gamma=3.0)
        a_s = default_alpha_s(law)
        grid = np.geomspace(1e-2, 8.0, 50)
        for r in grid[::5]:
            for R in grid[::5]:
                if R <= r * (1.0 + 1e-12):
                    continue
                fv = suliciu_vacuum_flux(r, 0.0, R, 0.0, law, alpha_s=a_s)
                f_rho, f_mom = oracle_suliciu_rest(r, R, law, a_s)
                assert fv.f_rho == pytest.approx(f_rho, rel=1e-12)
                assert fv.f_mom == pytest.approx(f_mom, rel=1e-12)

    def test_rest_mirror(self):
        a = suliciu_vacuum_flux(0.5, 0.0, 3.0, 0.0, LAW2)
        b = suliciu_vacuum_flux(3.0, 0.0, 0.5, 0.0, LAW2)
        assert a.f_mom == pytest.approx(b.f_mom, rel=1e-12)
        assert a.f_rho == pytest.approx(-b.f_rho, rel=1e-12)

    def test_one_sided_vacuum_update_stays_nonnegative(self):
        # left vacuum: mass flows toward it, and a CFL update keeps rho >= 0
        fv = suliciu_vacuum_flux(0.0, 0.0, 2.0, 0.0, LAW2)
        assert fv.f_rho <= 0.0
        dx = 1.0
        dt = dx / fv.sigma
        rho_left = 0.0 - dt / dx * (fv.f_rho - 0.0)
        rho_right = 2.0 - dt / dx * (0.0 - fv.f_rho)
        assert rho_left >= 0.0 and rho_right >= 0.0

    def test_both_vacuum(self):
        fv = suliciu_vacuum_flux(0.0, 0.0, 0.0, 0.0, LAW2)
        assert fv.f_rho == 0.0 and fv.f_mom == 0.0 and fv.sigma == 0.0

    def test_alpha_s_must_be_positive(self):
        with pytest.raises(ValueError):
            suliciu_vacuum_flux(1.0, 0.0, 1.0, 0.0, LAW2, alpha_s=0.0)


class TestConsistency:
    @settings(max_examples=300, deadline=None)
    @given(rho=densities, u=speeds, gamma=st.floats(min_value=1.2, max_value=4.0))
    def test_flux_of_equal_states_is_physical(self, rho, u, gamma):
        law = PressureLaw(kappa=1.0, gamma=gamma)
        expect_rho = rho * u
        expect_mom = rho * u * u + law.p(rho)
        for kind in FluxKind:
            fv = numerical_flux(kind, rho, u, rho, u, law)
            assert abs(fv.f_rho - expect_rho) <= 1e-12 * (1.0 + abs(expect_rho))
            assert abs(fv.f_mom - expect_mom) <= 1e-12 * (1.0 + abs(expect_mom))

    def test_strong_consistency_all_kinds(self):
        grid = np.geomspace(1e-3, 10.0, 50)
        for kind in FluxKind:
            report = strong_consistency_probe(kind, LAW2, grid, grid)
            assert report.passed, (kind, report.worst_margin, report.worst_pair)

    def test_probe_rejects_nonpositive_grid(self):
        with pytest.raises(ValueError):
            strong_consistency_probe(FluxKind.HLL, LAW2, np.array([0.0, 1.0]), np.array([1.0]))


class TestSignalSpeeds:
    @settings(max_examples=200, deadline=None)
    @given(rl=densities, rr=densities, ul=speeds, ur=speeds)
    def test_sigma_nonnegative(self, rl, rr, ul, ur):
        for kind in FluxKind:
            fv = numerical_flux(kind, rl, ul, rr, ur, LAW2)
            assert fv.sigma >= 0.0
