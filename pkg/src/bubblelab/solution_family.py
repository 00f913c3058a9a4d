"""Entire solutions of -Δv = v_+^gamma on R^n and their Newton-potential form.

Every nontrivial solution is v(x) = mu^q phi(mu |x - x0|) inside the ball of
radius r_star / mu and an explicit radial harmonic function outside it. All
evaluation goes through the radial distance |x - x0|.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .ode_core import GroundState, RadialProfile, unit_sphere_area

__all__ = [
    "EntireSolution",
    "FarField",
    "entire_solution",
    "eval_entire",
    "scale_action",
    "total_mass",
    "newton_potential",
    "representation_residual",
    "far_field_constants",
    "c_gamma_prime_quadrature",
    "default_radii",
]


@dataclass(frozen=True, eq=False)
class EntireSolution:
    gs: GroundState = field(repr=False)
    x0: np.ndarray
    mu: float
    q: float = field(init=False)
    profile: RadialProfile = field(init=False, repr=False)

    def __post_init__(self):
        params = self.gs.params
        if not params.gamma > 1.0:
            raise DomainError("entire solutions need gamma > 1 (oracle gamma = 1 excluded)")
        mu = float(self.mu)
        if not mu > 0.0 or not np.isfinite(mu):
            raise DomainError(f"scale mu must be positive, got {self.mu!r}")
        x0 = np.array(self.x0, dtype=float).reshape(-1)
        if x0.size != params.n:
            raise DomainError(f"center must have {params.n} coordinates, got {x0.size}")
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "q", self.gs.q)
        object.__setattr__(self, "profile", self.gs.profile.rescaled(mu, self.gs.q))

    @property
    def n(self) -> int:
        return self.gs.params.n

    @property
    def support_radius(self) -> float:
        return self.gs.r_star / self.mu

    @property
    def tail_coefficient(self) -> float:
        """Coefficient of |x - x0|^(2-n) in the exterior branch."""
        n = self.n
        return (self.mu ** (self.q - (n - 2)) * self.gs.lambda_flux
                / (unit_sphere_area(n) * (n - 2)))

    def radial(self, s):
        """v as a function of the distance s = |x - x0| (scalar or array)."""
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < 0.0):
            raise DomainError("distance must be nonnegative")
        rho = self.support_radius
        n = self.n
        inner = s_arr <= rho
        out = np.empty(s_arr.shape)
        if np.any(inner):
            out[inner] = self.profile(s_arr[inner])
        outer = ~inner
        if np.any(outer):
            so = s_arr[outer]
            out[outer] = self.tail_coefficient * (so ** (2 - n) - rho ** (2 - n))
        return float(out) if out.ndim == 0 else out

    def __call__(self, x):
        return eval_entire(self, x)


@dataclass(frozen=True)
class FarField:
    """v(x) = -c_gamma + c_gamma_prime |x - x0|^(2-n) outside the support."""

    c_gamma: float
    c_gamma_prime: float


def entire_solution(gs: GroundState, x0, mu: float) -> EntireSolution:
    return EntireSolution(gs=gs, x0=x0, mu=mu)


def eval_entire(sol: EntireSolution, x):
    """Evaluate at a point (length-n sequence) or an array of points (..., n)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != sol.n:
        raise DomainError(f"points must have {sol.n} coordinates")
    return sol.radial(np.linalg.norm(x - sol.x0, axis=-1))


def scale_action(sol: EntireSolution, nu: float) -> EntireSolution:
    """The family member nu^q v(nu x): scale nu * mu, center x0 / nu."""
    if not nu > 0.0:
        raise DomainError(f"scaling factor must be positive, got {nu!r}")
    return EntireSolution(gs=sol.gs, x0=sol.x0 / nu, mu=sol.mu * nu)


def total_mass(sol: EntireSolution) -> float:
    """Integral of v_+^(n(gamma-1)/2) over R^n (the support ball only)."""
    p = sol.gs.params.mass_exponent
    return unit_sphere_area(sol.n) * sol.profile.moment(p, sol.n - 1, 0.0, sol.support_radius)


def newton_potential(sol: EntireSolution, s: float) -> float:
    """Newton potential of v_+^gamma at distance ``s`` from the center.

    For a radial density f the n-dimensional integral
    (1/((n-2) omega)) ∫ |x-y|^(2-n) f(y) dy splits into shells inside and
    outside radius s:
    (1/(n-2)) [s^(2-n) ∫_0^s f t^(n-1) dt + ∫_s^rho f t dt].
    """
    if s < 0.0:
        raise DomainError("distance must be nonnegative")
    n, gamma = sol.n, sol.gs.params.gamma
    rho = sol.support_radius
    cut = min(s, rho)
    inner = 0.0
    if s > 0.0:
        inner = s ** (2 - n) * sol.profile.moment(gamma, n - 1, 0.0, cut)
    outer = sol.profile.moment(gamma, 1, cut, rho)
    return (inner + outer) / (n - 2)


def far_field_constants(sol: EntireSolution) -> FarField:
    c_prime = sol.tail_coefficient
    return FarField(c_gamma=c_prime * (sol.mu / sol.gs.r_star) ** (sol.n - 2),
                    c_gamma_prime=c_prime)


def c_gamma_prime_quadrature(sol: EntireSolution) -> float:
    """(1/((n-2) omega)) ∫ v_+^gamma dx by quadrature over the support."""
    n = sol.n
    return sol.profile.moment(sol.gs.params.gamma, n - 1, 0.0, sol.support_radius) / (n - 2)


def representation_residual(sol: EntireSolution, radii) -> float:
    """max over s of |v(s) - (N(s) - c_gamma)|."""
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if radii.size == 0:
        raise DomainError("radii must be nonempty")
    c_gamma = far_field_constants(sol).c_gamma
    values = sol.radial(radii)
    pot = np.array([newton_potential(sol, float(s)) for s in radii])
    return float(np.max(np.abs(values - (pot - c_gamma))))


def default_radii(sol: EntireSolution, count: int = 64, factor: float = 10.0) -> np.ndarray:
    """The origin plus ``count - 1`` log-spaced distances up to ``factor * r_star``."""
    top = factor * sol.gs.r_star
    return np.concatenate(([0.0], np.geomspace(1e-3 * top, top, count - 1)))
