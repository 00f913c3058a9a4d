"""Radial solutions on balls and the blowup, sup+inf and ε-regularity probes.

Solutions of -Δv = A(r) v_+^gamma on B_R are generated by shooting from the
center value a = v(0). With A ≡ A0 constant, w = A0^(1/(gamma-1)) v solves
the A ≡ 1 equation, so the family a = A0^(-1/(gamma-1)) mu^q is the
restriction of the entire solutions with scale mu: one bubble concentrating
at the origin as mu grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .ode_core import (ProblemParams, RadialProfile, ground_state, shoot_profile,
                       unit_sphere_area)

__all__ = [
    "ASpec",
    "BallSolution",
    "BlowupReport",
    "SupInfReport",
    "EpsRegReport",
    "shoot_ball",
    "mass_in_ball",
    "blowup_family",
    "sup_inf_probe",
    "eps_regularity_probe",
    "default_mu_grid",
]


def default_mu_grid(k_min: int = 0, k_max: int = 12) -> list[float]:
    return [2.0 ** k for k in range(k_min, k_max + 1)]


@dataclass(frozen=True)
class ASpec:
    """Radial coefficient A(r) = sum coeffs[k] r^k on [0, radius].

    ``sup_bound`` is the exact maximum over [0, radius] (endpoints and real
    critical points); construction fails if A takes a negative value there.
    """

    kind: str
    coeffs: tuple
    radius: float
    sup_bound: float = field(init=False)

    def __post_init__(self):
        if self.kind not in ("constant", "radial-polynomial"):
            raise DomainError(f"unknown coefficient kind {self.kind!r}")
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs or not all(math.isfinite(c) for c in coeffs):
            raise DomainError("coefficients must be finite and nonempty")
        if self.kind == "constant" and len(coeffs) != 1:
            raise DomainError("a constant coefficient takes exactly one value")
        if not self.radius > 0.0:
            raise DomainError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "coeffs", coeffs)
        poly = np.polynomial.Polynomial(coeffs)
        crit = poly.deriv().roots() if len(coeffs) > 2 else np.array(
            [] if len(coeffs) < 2 else [])
        cand = [0.0, float(self.radius)]
        cand += [float(z.real) for z in np.atleast_1d(crit)
                 if abs(z.imag) < 1e-12 and 0.0 < z.real < self.radius]
        cand_vals = poly(np.array(cand))
        sample = poly(np.linspace(0.0, self.radius, 257))
        lowest = min(cand_vals.min(), sample.min())
        if lowest < 0.0:
            raise DomainError(f"A(r) takes the negative value {lowest:g} on [0, {self.radius:g}]")
        object.__setattr__(self, "sup_bound", float(max(cand_vals.max(), sample.max())))

    @classmethod
    def constant(cls, value: float, radius: float) -> "ASpec":
        return cls("constant", (value,), radius)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float], radius: float) -> "ASpec":
        return cls("radial-polynomial", tuple(coeffs), radius)

    def __call__(self, r):
        return np.polynomial.polynomial.polyval(r, self.coeffs)


@dataclass(frozen=True, eq=False)
class BallSolution:
    """Radial solution on B_R with center value ``a``; ``profile`` holds the grid."""

    R: float
    a: float
    A: ASpec
    profile: RadialProfile = field(repr=False)
    mass_bound: float = math.inf

    @property
    def params(self) -> ProblemParams:
        return self.profile.params

    def __call__(self, r):
        return self.profile(r)

    def derivative(self, r):
        return self.profile.derivative(r)

    @property
    def zero(self):
        """Radius where v first vanishes inside the ball, or None."""
        return self.profile.r_zero

    def minimum(self) -> float:
        return float(min(self.profile.values.min(), self.profile(self.R)))

    def within_budget(self) -> bool:
        return mass_in_ball(self, self.R) <= self.mass_bound


def _constant_profile(params, a, R):
    nodes = np.array([0.0, R])
    return RadialProfile(nodes=nodes, values=np.full(2, float(a)), slopes=np.zeros(2),
                         curvatures=np.zeros(2), series=(float(a),), r_series=0.0,
                         params=params)


def shoot_ball(params: ProblemParams, A: ASpec, a: float, R: float,
               mass_bound: float = math.inf) -> BallSolution:
    """Integrate the radial equation on [0, R] from v(0) = a, v'(0) = 0."""
    if not R > 0.0:
        raise DomainError(f"ball radius must be positive, got {R!r}")
    if A.radius < R:
        raise DomainError(f"coefficient defined on [0, {A.radius:g}] but R = {R:g}")
    a = float(a)
    if a <= 0.0 or A.sup_bound == 0.0:
        return BallSolution(R=float(R), a=a, A=A, profile=_constant_profile(params, a, R),
                            mass_bound=mass_bound)
    k = math.sqrt(A.sup_bound * a ** (params.gamma - 1.0))
    profile = shoot_profile(params, a, float(R), coeffs=A.coeffs,
                            length_scale=max(k, 1.0 / R))
    return BallSolution(R=float(R), a=a, A=A, profile=profile, mass_bound=mass_bound)


def mass_in_ball(sol: BallSolution, rho: float) -> float:
    """omega * ∫_0^rho v_+^(n(gamma-1)/2) r^(n-1) dr."""
    if not 0.0 <= rho <= sol.R:
        raise DomainError(f"rho={rho!r} outside [0, {sol.R:g}]")
    if sol.a <= 0.0 or rho == 0.0:
        return 0.0
    n = sol.params.n
    return unit_sphere_area(n) * sol.profile.moment(sol.params.mass_exponent, n - 1, 0.0, rho)


def _check_grid(mu_values):
    mu = np.asarray(mu_values, dtype=float).reshape(-1)
    if mu.size == 0 or np.any(mu <= 0.0) or np.any(np.diff(mu) <= 0.0):
        raise DomainError("mu values must be positive and strictly increasing")
    return mu


def _center_value(params, A0, mu):
    return A0 ** (-1.0 / (params.gamma - 1.0)) * mu ** params.q


@dataclass(frozen=True)
class BlowupReport:
    mu_values: np.ndarray
    masses: np.ndarray
    sups: np.ndarray
    infs: np.ndarray
    quantum: float
    residuals: np.ndarray
    v_half: np.ndarray
    v_edge: np.ndarray
    support_radii: np.ndarray
    A0: float
    R: float
    lambda_mass: float

    @property
    def contained(self) -> np.ndarray:
        """Whether the positivity set lies strictly inside B_R, per mu."""
        return np.isfinite(self.support_radii) & (self.support_radii < self.R)


def blowup_family(params: ProblemParams, A0: float, mu_values, R: float) -> BlowupReport:
    """Shoot the single-bubble family a = A0^(-1/(gamma-1)) mu^q on B_R.

    Records the mass in the ball, v(0), the minimum over [0, R] and the values
    at R/2 and R, which tend to -inf along the family.
    """
    if not A0 > 0.0:
        raise DomainError(f"A0 must be positive, got {A0!r}")
    mu = _check_grid(mu_values)
    gs = ground_state(params)
    A = ASpec.constant(A0, R)
    quantum = A0 ** (-params.n / 2.0) * gs.lambda_mass
    masses, sups, infs, half, edge, supp = [], [], [], [], [], []
    for m in mu:
        sol = shoot_ball(params, A, _center_value(params, A0, m), R)
        masses.append(mass_in_ball(sol, R))
        sups.append(sol(0.0))
        infs.append(sol.minimum())
        half.append(sol(0.5 * R))
        edge.append(sol(R))
        supp.append(sol.zero if sol.zero is not None else math.inf)
    masses = np.array(masses)
    return BlowupReport(
        mu_values=mu, masses=masses, sups=np.array(sups), infs=np.array(infs),
        quantum=quantum, residuals=np.abs(masses - quantum), v_half=np.array(half),
        v_edge=np.array(edge), support_radii=np.array(supp), A0=float(A0), R=float(R),
        lambda_mass=gs.lambda_mass)


@dataclass(frozen=True)
class SupInfReport:
    """v(0) + C_used * min_{B_R} v along the family; ``bound`` is the largest value.

    ``C_star`` = omega (n-2) r_star^(n-2) / lambda_flux is the coefficient at
    which the mu^q growth of v(0) and of the exterior tail cancel exactly; it
    does not depend on A0 because both terms scale by A0^(-1/(gamma-1)).
    """

    mu_values: np.ndarray
    sups: np.ndarray
    infs: np.ndarray
    values: np.ndarray
    C_used: float
    C_star: float
    bound: float
    mu_at_bound: float


def sup_inf_probe(params: ProblemParams, A0: float, mu_values, R: float,
                  C_used: float) -> SupInfReport:
    if C_used < 0.0:
        raise DomainError("C_used must be nonnegative")
    rep = blowup_family(params, A0, mu_values, R)
    gs = ground_state(params)
    n = params.n
    c_star = unit_sphere_area(n) * (n - 2) * gs.r_star ** (n - 2) / gs.lambda_flux
    values = rep.sups + C_used * rep.infs
    k = int(np.argmax(values))
    return SupInfReport(mu_values=rep.mu_values, sups=rep.sups, infs=rep.infs,
                        values=values, C_used=float(C_used), C_star=c_star,
                        bound=float(values[k]), mu_at_bound=float(rep.mu_values[k]))


@dataclass(frozen=True)
class EpsRegReport:
    """Largest center value among A ≡ 1 family members with mass eps in B_R.

    ``c_of_eps`` is a lower bound for the ε-regularity constant, restricted
    to the explicit family; ``c_limit`` = (r_star / R)^q is its value as eps
    reaches the quantum.
    """

    eps: float
    c_of_eps: float
    mu_at_sup: float
    quantum: float
    c_limit: float
    iterations: int


def eps_regularity_probe(params: ProblemParams, eps: float, R: float,
                         rtol: float = 1e-10) -> EpsRegReport:
    """Bisect for the scale mu whose ball mass equals ``eps``.

    The mass in B_R is nondecreasing in mu and reaches the quantum once the
    support r_star / mu fits in the ball, so the bisection runs on
    (0, r_star / R].
    """
    if not R > 0.0:
        raise DomainError(f"ball radius must be positive, got {R!r}")
    gs = ground_state(params)
    quantum = gs.lambda_mass
    if not 0.0 < eps < quantum:
        raise DomainError(f"eps={eps!r} must lie in (0, quantum={quantum:.17g})")
    A = ASpec.constant(1.0, R)

    def mass(mu):
        return mass_in_ball(shoot_ball(params, A, mu ** params.q, R), R)

    lo, hi = 0.0, gs.r_star / R
    it = 0
    while hi - lo > rtol * hi and it < 200:
        mid = 0.5 * (lo + hi)
        if mass(mid) < eps:
            lo = mid
        else:
            hi = mid
        it += 1
    mu_eps = 0.5 * (lo + hi)
    return EpsRegReport(eps=float(eps), c_of_eps=mu_eps ** params.q, mu_at_sup=mu_eps,
                        quantum=quantum, c_limit=(gs.r_star / R) ** params.q,
                        iterations=it)
