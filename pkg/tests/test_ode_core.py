import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from scipy import integrate

from bubblelab.errors import DomainError, ZeroNotFoundError
from bubblelab.ode_core import (ProblemParams, first_zero, ground_state, integrate_phi,
                                series_start, unit_sphere_area)

from conftest import ORACLE, cached_ground_state


class TestProblemParams:
    def test_defaults(self):
        p = ProblemParams(3, 2.0)
        assert (p.tol_ode, p.tol_root, p.r_max) == (1e-10, 1e-12, 50.0)
        assert p.q == 2.0
        assert p.mass_exponent == 1.5

    @pytest.mark.parametrize("n,gamma", [(3, 5.0), (3, 5.5), (4, 3.0), (5, 7 / 3)])
    def test_critical_exponent_rejected(self, n, gamma):
        with pytest.raises(DomainError, match="critical exponent"):
            ProblemParams(n, gamma)

    def test_gamma_one_needs_oracle_mode(self):
        with pytest.raises(DomainError):
            ProblemParams(3, 1.0)
        assert ProblemParams(3, 1.0, oracle_mode=True).gamma == 1.0
        with pytest.raises(DomainError):
            ProblemParams(3, 0.9, oracle_mode=True)

    @pytest.mark.parametrize("kw", [dict(tol_root=1e-9, tol_ode=1e-10), dict(tol_ode=1.0),
                                    dict(tol_root=0.0), dict(r_max=0.0)])
    def test_tolerances(self, kw):
        with pytest.raises(DomainError):
            ProblemParams(3, 2.0, **kw)

    @pytest.mark.parametrize("n", [2, 3.5, True])
    def test_dimension(self, n):
        with pytest.raises(DomainError):
            ProblemParams(n, 1.5)


class TestUnitSphereArea:
    def test_closed_forms(self):
        assert unit_sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
        assert unit_sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
        assert unit_sphere_area(4) == pytest.approx(2 * math.pi ** 2, rel=1e-15)
        assert unit_sphere_area(6) == pytest.approx(math.pi ** 3, rel=1e-15)

    @pytest.mark.parametrize("n", range(2, 21))
    def test_against_gamma_function(self, n):
        ref = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
        assert unit_sphere_area(n) == pytest.approx(ref, rel=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            unit_sphere_area(1)


class TestSeriesStart:
    def test_origin(self):
        assert series_start(ProblemParams(4, 1.5), 0.0) == (1.0, 0.0)

    def test_sin_over_r(self):
        p = ProblemParams(3, 1.0, oracle_mode=True)
        r0 = 1e-2
        phi, dphi = series_start(p, r0)
        assert abs(phi - math.sin(r0) / r0) <= 1e-9
        assert abs(dphi - (math.cos(r0) / r0 - math.sin(r0) / r0 ** 2)) <= 1e-9

    def test_precondition(self):
        p = ProblemParams(3, 1.0, oracle_mode=True)
        with pytest.raises(DomainError):
            series_start(p, -1e-3)
        with pytest.raises(DomainError):
            series_start(p, 0.1)

    @pytest.mark.parametrize("n,gamma", [(3, 2.0), (4, 1.6), (5, 2.2)])
    def test_residual_is_fourth_order(self, n, gamma):
        # leading term of phi'' + (n-1)/r phi' + phi^gamma for the quartic series
        r, g = sp.symbols("r g", positive=True)
        phi = 1 - r ** 2 / (2 * n) + g * r ** 4 / (8 * n * (n + 2))
        res = sp.diff(phi, r, 2) + (n - 1) / r * sp.diff(phi, r) + phi ** g
        lead = sp.series(res, r, 0, 6).removeO().coeff(r, 4).subs(g, gamma)
        r0 = 0.01
        p0, d0 = series_start(ProblemParams(n, gamma), r0)
        d2 = -1 / n + 3 * gamma * r0 ** 2 / (2 * n * (n + 2))
        numeric = d2 + (n - 1) / r0 * d0 + p0 ** gamma
        assert numeric == pytest.approx(float(lead) * r0 ** 4, rel=1e-3)


class TestIntegratePhi:
    def test_matches_sin_over_r(self):
        prof = integrate_phi(ProblemParams(3, 1.0, oracle_mode=True))
        r = np.linspace(0.0, math.pi, 4001)
        exact = np.sinc(r / math.pi)
        assert np.max(np.abs(prof(r) - exact)) <= 1e-9

    def test_center_value_exact(self):
        for n, g in [(3, 2.0), (4, 1.6), (6, 1.5)]:
            prof = cached_ground_state(n, g).profile
            assert prof(0.0) == 1.0
            assert prof.derivative(0.0) == 0.0

    @pytest.mark.parametrize("n,g", [(3, 2.0), (4, 1.6), (5, 2.2), (3, 4.6)])
    def test_strictly_decreasing(self, n, g):
        prof = cached_ground_state(n, g).profile
        assert np.all(prof.slopes[1:] < 0)
        assert np.all(np.diff(prof.values) < 0)

    @pytest.mark.parametrize("n,g", [(3, 2.0), (4, 1.6), (5, 1.4), (3, 4.2)])
    def test_flux_identity_at_nodes(self, n, g):
        gs = cached_ground_state(n, g)
        prof, tol = gs.profile, gs.params.tol_ode
        nodes = prof.nodes[prof.nodes <= gs.r_star]
        # cumulative integral of phi^gamma t^(n-1) between nodes, independent quadrature
        cum = [0.0]
        for a, b in zip(nodes[:-1], nodes[1:]):
            piece, _ = integrate.quad(lambda t: max(prof(t), 0.0) ** g * t ** (n - 1), a, b,
                                      epsabs=1e-15, epsrel=1e-13)
            cum.append(cum[-1] + piece)
        idx = np.searchsorted(prof.nodes, nodes)
        lhs = np.abs(nodes ** (n - 1) * prof.slopes[idx] + np.array(cum))
        assert np.all(lhs <= 10 * tol * (1 + nodes ** (n - 1)))

    def test_extends_past_zero(self):
        gs = cached_ground_state(3, 2.0)
        assert gs.profile.values[-1] < 0
        assert gs.profile.r_stop >= 1.25 * gs.r_star * (1 - 1e-12)

    def test_harmonic_beyond_last_node(self):
        gs = cached_ground_state(3, 2.0)
        prof = gs.profile
        rl, vl, wl = prof.r_stop, prof.values[-1], prof.slopes[-1]
        r = 3 * rl
        assert prof(r) == pytest.approx(vl + wl * rl ** 2 * (1 / rl - 1 / r), rel=1e-14)

    def test_near_critical_needs_larger_window(self):
        with pytest.raises(ZeroNotFoundError):
            integrate_phi(ProblemParams(3, 4.8))
        assert ground_state(ProblemParams(3, 4.8, r_max=200.0)).r_star > 50

    def test_zero_not_found(self):
        with pytest.raises(ZeroNotFoundError) as info:
            integrate_phi(ProblemParams(3, 4.9))
        assert info.value.r == pytest.approx(50.0)
        assert info.value.value > 0


class TestFirstZero:
    def test_gamma_one(self):
        gs = cached_ground_state(3, 1.0, oracle_mode=True)
        assert abs(gs.r_star - math.pi) <= 1e-8
        assert abs(gs.alpha_star - 1 / math.pi) <= 1e-8

    @pytest.mark.parametrize("key", sorted(ORACLE))
    def test_against_frozen_oracle(self, key):
        n, g = key
        gs = cached_ground_state(n, g, oracle_mode=(g == 1.0))
        r_star, alpha, lam, mass = ORACLE[key]
        assert gs.r_star == pytest.approx(r_star, rel=1e-10)
        assert gs.alpha_star == pytest.approx(alpha, rel=1e-8)

    @pytest.mark.parametrize("n,g", [(3, 2.0), (4, 1.6), (5, 1.8)])
    def test_bracketing(self, n, g):
        gs = cached_ground_state(n, g)
        tol = gs.params.tol_root
        assert gs.profile(gs.r_star - tol) > 0 > gs.profile(gs.r_star + tol)
        assert first_zero(gs.profile) == (gs.r_star, gs.alpha_star)

    def test_refinement_convergence(self):
        fine = ground_state(ProblemParams(3, 2.0, tol_ode=5e-11, tol_root=5e-13))
        coarse = cached_ground_state(3, 2.0)
        assert abs(fine.r_star - coarse.r_star) <= 10 * 5e-11
        assert abs(fine.alpha_star - coarse.alpha_star) <= 10 * 5e-11


class TestGroundState:
    def test_gamma_one_flux(self):
        gs = cached_ground_state(3, 1.0, oracle_mode=True)
        assert gs.lambda_flux == pytest.approx(4 * math.pi ** 2, rel=1e-6)
        assert gs.lambda_mass == pytest.approx(4 * math.pi ** 4 / 3, rel=1e-9)

    @pytest.mark.parametrize("key", sorted(ORACLE))
    def test_constants_against_oracle(self, key):
        n, g = key
        gs = cached_ground_state(n, g, oracle_mode=(g == 1.0))
        _, _, lam, mass = ORACLE[key]
        assert gs.lambda_flux == pytest.approx(lam, rel=1e-8)
        assert gs.lambda_flux_quad == pytest.approx(lam, rel=1e-8)
        assert gs.lambda_mass == pytest.approx(mass, rel=1e-8)
        assert gs.q == (2 / (g - 1) if g > 1 else math.inf)

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(3, 6), frac=st.floats(0.02, 0.95))
    def test_two_routes_agree(self, n, frac):
        gamma = 1 + frac * ((n + 2) / (n - 2) - 1)
        # r_star passes 50 as gamma nears the critical exponent in n = 3
        gs = ground_state(ProblemParams(n, gamma, r_max=200.0))
        assert gs.r_star > 0 and gs.alpha_star > 0
        assert abs(gs.lambda_flux - gs.lambda_flux_quad) / gs.lambda_flux <= 1e-8

    @pytest.mark.parametrize("n,g", [(3, 3.0), (4, 2.0), (6, 1.5)])
    def test_exponents_coincide(self, n, g):
        gs = cached_ground_state(n, g)
        assert abs(gs.lambda_mass - gs.lambda_flux) / gs.lambda_flux <= 1e-6

    @pytest.mark.parametrize("n,g", [(3, 1.5), (3, 2.0), (4, 1.6), (3, 3.5), (3, 4.5),
                                     (4, 2.5), (5, 2.0)])
    def test_pointwise_comparison_sign(self, n, g):
        gs = cached_ground_state(n, g)
        if g < n / (n - 2):
            assert gs.lambda_mass > gs.lambda_flux
        else:
            assert gs.lambda_mass < gs.lambda_flux
