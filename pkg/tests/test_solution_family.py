import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bubblelab.errors import DomainError
from bubblelab.solution_family import (c_gamma_prime_quadrature, default_radii,
                                       entire_solution, eval_entire, far_field_constants,
                                       newton_potential, representation_residual,
                                       scale_action, total_mass)

from conftest import ORACLE, PHI_HALF_3_2, cached_ground_state

ORIGIN3 = np.zeros(3)


def unit(n):
    e = np.zeros(n)
    e[0] = 1.0
    return e


class TestConstruction:
    def test_rejects_gamma_one(self):
        gs = cached_ground_state(3, 1.0, oracle_mode=True)
        with pytest.raises(DomainError):
            entire_solution(gs, ORIGIN3, 1.0)

    @pytest.mark.parametrize("mu", [0.0, -1.0, math.nan])
    def test_rejects_bad_scale(self, gs32, mu):
        with pytest.raises(DomainError):
            entire_solution(gs32, ORIGIN3, mu)

    def test_rejects_wrong_dimension(self, gs32):
        with pytest.raises(DomainError):
            entire_solution(gs32, [0.0, 0.0], 1.0)

    def test_immutable_center(self, gs32):
        x0 = np.array([1.0, 2.0, 3.0])
        sol = entire_solution(gs32, x0, 1.0)
        x0[0] = 9.0
        assert sol.x0[0] == 1.0
        with pytest.raises(ValueError):
            sol.x0[0] = 5.0


class TestEvaluation:
    @pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
    def test_center_value(self, gs32, mu):
        x0 = np.array([0.3, -1.0, 2.0])
        sol = entire_solution(gs32, x0, mu)
        assert eval_entire(sol, x0) == pytest.approx(mu ** 2, rel=1e-15)

    @pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
    def test_vanishes_on_support_sphere(self, gs32, mu):
        sol = entire_solution(gs32, ORIGIN3, mu)
        assert abs(eval_entire(sol, unit(3) * gs32.r_star / mu)) <= 1e-10

    def test_exterior_value(self, gs32):
        r_star, _, lam, _ = ORACLE[(3, 2.0)]
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        assert sol.radial(2 * gs32.r_star) == pytest.approx(-lam / (8 * math.pi * r_star),
                                                            rel=1e-9)

    def test_interface_continuity(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 2.0)
        rho = sol.support_radius
        tol = gs32.params.tol_root
        slope = sol.tail_coefficient * rho ** -2
        for delta in (1e-4, 1e-6, 1e-8):
            jump = abs(sol.radial(rho - delta) - sol.radial(rho + delta))
            assert jump <= 2 * delta * slope * 1.001 + tol
        h = 1e-7
        inner = (sol.radial(rho) - sol.radial(rho - h)) / h
        outer = (sol.radial(rho + h) - sol.radial(rho)) / h
        assert abs(inner - outer) <= 1e-5 + tol

    def test_far_limit(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.5)
        c = far_field_constants(sol).c_gamma
        assert sol.radial(1e12) == pytest.approx(-c, rel=1e-10)

    def test_interior_profile_oracle(self, gs32):
        mu = 4.0
        sol = entire_solution(gs32, ORIGIN3, mu)
        r_star = ORACLE[(3, 2.0)][0]
        assert sol.radial(r_star / (2 * mu)) == pytest.approx(mu ** 2 * PHI_HALF_3_2, rel=1e-9)

    def test_vectorised_points(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        pts = np.outer(np.linspace(0, 20, 7), unit(3))
        out = eval_entire(sol, pts)
        assert out.shape == (7,)
        assert np.all(np.diff(out) < 0)
        assert out[0] == 1.0
        assert np.all(out[-3:] < 0)

    def test_radial_symmetry(self, gs32):
        sol = entire_solution(gs32, [1.0, 0.0, -2.0], 0.7)
        rng = np.random.default_rng(7)
        d = rng.normal(size=(5, 3))
        d *= 3.0 / np.linalg.norm(d, axis=1, keepdims=True)
        vals = eval_entire(sol, sol.x0 + d)
        assert np.ptp(vals) <= 4e-16

    def test_negative_distance(self, gs32):
        with pytest.raises(DomainError):
            entire_solution(gs32, ORIGIN3, 1.0).radial(-1.0)


class TestScaleAction:
    def test_identity(self, gs32):
        sol = entire_solution(gs32, [1.0, 2.0, 3.0], 1.5)
        same = scale_action(sol, 1.0)
        assert same.mu == sol.mu and np.array_equal(same.x0, sol.x0)

    @pytest.mark.parametrize("a,b", [(2.0, 0.5), (0.25, 8.0), (4.0, 16.0), (0.125, 0.5)])
    def test_group_law(self, gs32, a, b):
        sol = entire_solution(gs32, [0.3, -1.1, 2.7], 1.3)
        left = scale_action(scale_action(sol, a), b)
        right = scale_action(sol, a * b)
        assert left.mu == right.mu
        assert np.array_equal(left.x0, right.x0)
        s = np.geomspace(1e-3, 50, 40)
        assert np.array_equal(left.radial(s), right.radial(s))

    def test_is_rescaling(self, gs32):
        sol = entire_solution(gs32, [0.5, 0.0, 1.0], 1.0)
        nu = 3.0
        scaled = scale_action(sol, nu)
        x = np.array([[0.2, 0.1, 0.3], [1.0, 2.0, 0.5], [3.0, -1.0, 4.0]])
        assert np.allclose(eval_entire(scaled, x), nu ** 2 * eval_entire(sol, nu * x),
                           rtol=1e-9, atol=1e-12)

    @pytest.mark.parametrize("nu", [0.0, -2.0])
    def test_rejects(self, gs32, nu):
        with pytest.raises(DomainError):
            scale_action(entire_solution(gs32, ORIGIN3, 1.0), nu)


class TestMass:
    @pytest.mark.parametrize("nu", [0.5, 8.0, 3.0, 0.3])
    def test_invariant(self, gs32, nu):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        m0, m1 = total_mass(sol), total_mass(scale_action(sol, nu))
        assert abs(m1 - m0) / m0 <= 1e-9

    def test_equals_lambda_mass(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 2.0)
        assert total_mass(sol) == pytest.approx(gs32.lambda_mass, rel=1e-8)
        assert total_mass(sol) == pytest.approx(ORACLE[(3, 2.0)][3], rel=1e-8)

    def test_coincides_with_flux_at_matching_exponent(self):
        gs = cached_ground_state(3, 3.0)
        sol = entire_solution(gs, ORIGIN3, 1.0)
        assert total_mass(sol) == pytest.approx(gs.lambda_flux, rel=1e-6)


class TestNewtonPotential:
    def test_outside_support(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        cp = far_field_constants(sol).c_gamma_prime
        for s in (sol.support_radius, 5.0, 40.0):
            assert newton_potential(sol, s) == pytest.approx(cp / s, rel=1e-8)

    def test_at_center(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        c = far_field_constants(sol).c_gamma
        assert newton_potential(sol, 0.0) == pytest.approx(1.0 + c, rel=1e-9)

    def test_continuous_decreasing(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        s = np.concatenate(([0.0], np.geomspace(1e-4, 40, 120)))
        pot = np.array([newton_potential(sol, x) for x in s])
        assert np.all(np.diff(pot) < 0)
        assert np.max(np.abs(np.diff(pot))) < 0.1

    def test_negative(self, gs32):
        with pytest.raises(DomainError):
            newton_potential(entire_solution(gs32, ORIGIN3, 1.0), -0.5)


class TestRepresentation:
    @pytest.mark.parametrize("n,g,mu", [(3, 2.0, 1.0), (4, 1.6, 3.0), (5, 1.8, 0.5),
                                        (3, 4.0, 2.0), (6, 1.5, 1.0)])
    def test_residual(self, n, g, mu):
        sol = entire_solution(cached_ground_state(n, g), np.zeros(n), mu)
        radii = default_radii(sol)
        assert radii.size == 64 and radii[0] == 0.0
        assert radii[-1] == pytest.approx(10 * sol.gs.r_star)
        assert representation_residual(sol, radii) <= 1e-6

    def test_far_residual(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        assert representation_residual(sol, [1e6, 1e9]) <= 1e-12

    def test_covariance(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        radii = default_radii(sol)
        r1 = representation_residual(sol, radii)
        r2 = representation_residual(scale_action(sol, 2.0), radii / 2)
        assert r2 == pytest.approx(4.0 * r1, rel=1e-6, abs=1e-14)

    def test_empty(self, gs32):
        with pytest.raises(DomainError):
            representation_residual(entire_solution(gs32, ORIGIN3, 1.0), [])


class TestFarField:
    def test_closed_form(self, gs32):
        sol = entire_solution(gs32, ORIGIN3, 1.0)
        ff = far_field_constants(sol)
        assert ff.c_gamma_prime == pytest.approx(ORACLE[(3, 2.0)][2] / (4 * math.pi), rel=1e-9)
        assert ff.c_gamma == ff.c_gamma_prime * (sol.mu / gs32.r_star) ** 1

    @pytest.mark.parametrize("n,g,mu", [(3, 2.0, 1.0), (4, 1.6, 3.0), (5, 2.0, 0.7)])
    def test_quadrature_cross_check(self, n, g, mu):
        sol = entire_solution(cached_ground_state(n, g), np.zeros(n), mu)
        cp = far_field_constants(sol).c_gamma_prime
        assert abs(c_gamma_prime_quadrature(sol) - cp) / cp <= 1e-8

    @settings(max_examples=30, deadline=None)
    @given(mu=st.floats(0.05, 20.0), t=st.floats(1.0, 1e3))
    def test_exterior_exactness(self, mu, t):
        gs = cached_ground_state(4, 1.6)
        sol = entire_solution(gs, np.zeros(4), mu)
        ff = far_field_constants(sol)
        s = t * sol.support_radius
        lhs = s ** 2 * (sol.radial(s) + ff.c_gamma)
        # rounding of the cancelling sum v + c_gamma is carried by s^2 c_gamma
        rounding = 8 * np.finfo(float).eps * s ** 2 * ff.c_gamma
        assert abs(lhs - ff.c_gamma_prime) <= 1e-10 * ff.c_gamma_prime + rounding
