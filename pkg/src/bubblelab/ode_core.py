"""Ground-state profile of phi'' + (n-1)/r phi' + phi_+^gamma = 0, phi(0) = 1.

The profile is integrated from a Taylor start near the origin with an adaptive
Dormand-Prince pair; the first zero is landed on exactly and the stored nodes
carry value, slope and second derivative, so the dense output is a C^2
piecewise quintic Hermite interpolant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, IntegrationError, ZeroNotFoundError

__all__ = [
    "ProblemParams",
    "RadialProfile",
    "GroundState",
    "unit_sphere_area",
    "series_start",
    "integrate_phi",
    "first_zero",
    "ground_state",
    "shoot_profile",
]

QUAD_EPSREL = 1e-12
MAX_STEPS = 2_000_000


def critical_exponent(n: int) -> float:
    return (n + 2) / (n - 2)


@dataclass(frozen=True)
class ProblemParams:
    """Dimension, exponent and numerical tolerances.

    ``oracle_mode`` admits gamma = 1 (where phi = sin r / r for n = 3) for
    validation runs; everywhere else gamma must lie in (1, (n+2)/(n-2)).
    """

    n: int
    gamma: float
    tol_ode: float = 1e-10
    tol_root: float = 1e-12
    r_max: float = 50.0
    oracle_mode: bool = False

    def __post_init__(self):
        n, gamma = self.n, self.gamma
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 3:
            raise DomainError(f"dimension n must be an integer >= 3, got {n!r}")
        object.__setattr__(self, "n", int(n))
        gamma = float(gamma)
        object.__setattr__(self, "gamma", gamma)
        crit = critical_exponent(self.n)
        if not math.isfinite(gamma) or gamma >= crit:
            raise DomainError(
                f"gamma={gamma:g} must be below the critical exponent "
                f"(n+2)/(n-2) = {crit:g} for n={self.n}")
        if self.oracle_mode:
            if gamma < 1.0:
                raise DomainError(f"gamma={gamma:g} must be >= 1 in oracle mode")
        elif gamma <= 1.0:
            raise DomainError(f"gamma={gamma:g} must exceed 1 (gamma = 1 needs oracle mode)")
        if not 0.0 < self.tol_root <= self.tol_ode < 1.0:
            raise DomainError(
                f"tolerances must satisfy 0 < tol_root <= tol_ode < 1, got "
                f"tol_root={self.tol_root:g}, tol_ode={self.tol_ode:g}")
        if not self.r_max > 0.0:
            raise DomainError(f"r_max must be positive, got {self.r_max:g}")

    @property
    def q(self) -> float:
        return 2.0 / (self.gamma - 1.0) if self.gamma > 1.0 else math.inf

    @property
    def mass_exponent(self) -> float:
        return self.n * (self.gamma - 1.0) / 2.0


def unit_sphere_area(n: int) -> float:
    """Area of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2).

    Uses omega_{n-1} = 2 pi omega_{n-3} / (n - 2) from omega_1 = 2 pi and
    omega_2 = 4 pi, so no general Gamma function is needed.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"unit_sphere_area needs an integer n >= 2, got {n!r}")
    n = int(n)
    area = 2.0 * math.pi if n % 2 == 0 else 4.0 * math.pi
    for k in range(4 if n % 2 == 0 else 5, n + 1, 2):
        area *= 2.0 * math.pi / (k - 2)
    return area


def _series_coeffs(n, gamma, coeffs, a):
    # v = a + b2 r^2 + b3 r^3 + b4 r^4 for (r^{n-1} v')' = -r^{n-1} A(r) v^gamma
    c0 = coeffs[0]
    c1 = coeffs[1] if len(coeffs) > 1 else 0.0
    c2 = coeffs[2] if len(coeffs) > 2 else 0.0
    ag = a ** gamma
    b2 = -c0 * ag / (2 * n)
    b3 = -c1 * ag / (3 * (n + 1))
    b4 = -(c2 * ag + c0 * gamma * a ** (gamma - 1.0) * b2) / (4 * (n + 2))
    return (a, 0.0, b2, b3, b4)


def series_start(params: ProblemParams, r0: float) -> tuple[float, float]:
    """Fourth-order Taylor values (phi(r0), phi'(r0)) of the profile."""
    if r0 < 0.0:
        raise DomainError(f"series radius must be nonnegative, got {r0:g}")
    if r0 > 1e-2:
        raise DomainError(f"series radius {r0:g} exceeds 1e-2")
    n, g = params.n, params.gamma
    r2 = r0 * r0
    phi = 1.0 - r2 / (2 * n) + g * r2 * r2 / (8 * n * (n + 2))
    dphi = -r0 / n + g * r2 * r0 / (2 * n * (n + 2))
    return phi, dphi


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Radial solution sampled at adaptive nodes with C^2 dense output.

    ``values``, ``slopes`` and ``curvatures`` hold v, v' and v'' at ``nodes``;
    on ``[0, r_series]`` evaluation uses the Taylor polynomial ``series``
    (coefficients in increasing powers of r). Past a located zero the equation
    is radially harmonic, so evaluation beyond the last node continues with
    the exact tail c1 + c2 r^(2-n).
    """

    nodes: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    curvatures: np.ndarray
    series: tuple
    r_series: float
    params: ProblemParams
    zero_index: Optional[int] = None
    coeffs: tuple = (1.0,)

    @property
    def r_stop(self) -> float:
        return float(self.nodes[-1])

    @property
    def center_value(self) -> float:
        return float(self.values[0])

    @property
    def r_zero(self) -> Optional[float]:
        """Node radius where the first zero was landed, if any."""
        if self.zero_index is None:
            return None
        return float(self.nodes[self.zero_index])

    def evaluate(self, r):
        """Return ``(v(r), v'(r))`` for scalar or array ``r >= 0``."""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0.0):
            raise DomainError("radius must be nonnegative")
        val, der = kernels.hermite_eval(self.nodes, self.values, self.slopes,
                                        self.curvatures, r_arr)
        val = np.array(val, dtype=float).reshape(r_arr.shape)
        der = np.array(der, dtype=float).reshape(r_arr.shape)
        near = r_arr <= self.r_series
        if np.any(near):
            poly = np.polynomial.Polynomial(self.series)
            val[near] = poly(r_arr[near])
            der[near] = poly.deriv()(r_arr[near])
        far = r_arr > self.r_stop
        if np.any(far):
            if self.zero_index is None:
                raise DomainError(
                    f"radius beyond the integrated range [0, {self.r_stop:g}]")
            n = self.params.n
            rl, vl, wl = self.r_stop, self.values[-1], self.slopes[-1]
            flux = wl * rl ** (n - 1)
            rf = r_arr[far]
            val[far] = vl + flux / (2 - n) * (rf ** (2 - n) - rl ** (2 - n))
            der[far] = flux * rf ** (1 - n)
        if val.ndim == 0:
            return float(val), float(der)
        return val, der

    def __call__(self, r):
        return self.evaluate(r)[0]

    def derivative(self, r):
        return self.evaluate(r)[1]

    def moment(self, p: float, m: float, lo: float, hi: float,
               epsrel: float = QUAD_EPSREL) -> float:
        """Integral of max(v, 0)^p r^m over [lo, hi] on the dense output."""
        if hi <= lo:
            return 0.0
        scale = max(abs(self.center_value), 1e-300) ** p * max(hi, 1e-300) ** m
        epsabs = 1e-3 * epsrel * scale * (hi - lo)
        return kernels.power_moment(self.nodes, self.values, self.slopes, self.curvatures,
                                    float(p), float(m), float(lo), float(hi), epsrel, epsabs)

    def rescaled(self, mu: float, q: float) -> "RadialProfile":
        """Profile of s -> mu^q v(mu s), the scaling that preserves the equation."""
        amp = mu ** q
        series = tuple(c * amp * mu ** k for k, c in enumerate(self.series))
        return RadialProfile(
            nodes=self.nodes / mu,
            values=self.values * amp,
            slopes=self.slopes * (amp * mu),
            curvatures=self.curvatures * (amp * mu * mu),
            series=series,
            r_series=self.r_series / mu,
            params=self.params,
            zero_index=self.zero_index,
            coeffs=self.coeffs,
        )


def _series_radius(tol):
    return min(max(tol ** 0.25, 1e-4), 1e-2)


def shoot_profile(params: ProblemParams, a: float, r_end: float,
                  coeffs: Sequence[float] = (1.0,), past_zero: float = 0.0,
                  length_scale: float = 1.0) -> RadialProfile:
    """Integrate (r^{n-1} v')' = -r^{n-1} A(r) v_+^gamma from v(0) = a > 0.

    ``coeffs`` are the polynomial coefficients of A in r. ``length_scale`` is
    the natural inverse length of the solution near the origin; the series
    radius and absolute tolerances are scaled by it and by ``a``.
    With ``past_zero > 0`` integration stops shortly after
    ``past_zero * r_zero`` instead of at ``r_end``.
    """
    n, gamma, tol = params.n, params.gamma, params.tol_ode
    coeffs = tuple(float(c) for c in coeffs)
    series = _series_coeffs(n, gamma, coeffs, a)
    r0 = min(_series_radius(tol) / length_scale, 0.5 * r_end)
    poly = np.polynomial.Polynomial(series)
    v0, dv0 = float(poly(r0)), float(poly.deriv()(r0))
    rs, vs, ws, zero_index, status = kernels.integrate_radial(
        n, gamma, np.asarray(coeffs, dtype=float), r0, v0, dv0, float(r_end), tol,
        tol * a, tol * a * length_scale, r0, float(past_zero), MAX_STEPS)
    if status in (kernels.STATUS_UNDERFLOW, kernels.STATUS_MAX_STEPS):
        reason = "step size underflow" if status == kernels.STATUS_UNDERFLOW else "step limit"
        raise IntegrationError(f"radial integration failed ({reason})",
                               r=float(rs[-1]), value=float(vs[-1]))
    nodes = np.concatenate(([0.0], rs))
    values = np.concatenate(([a], vs))
    slopes = np.concatenate(([0.0], ws))
    acoef = np.polynomial.polynomial.polyval(nodes, coeffs)
    curv = np.empty_like(nodes)
    curv[0] = -coeffs[0] * a ** gamma / n
    curv[1:] = (-(n - 1) / nodes[1:] * slopes[1:]
                - acoef[1:] * np.maximum(values[1:], 0.0) ** gamma)
    return RadialProfile(
        nodes=nodes, values=values, slopes=slopes, curvatures=curv, series=series,
        r_series=r0, params=params,
        zero_index=None if zero_index < 0 else int(zero_index) + 1,
        coeffs=coeffs)


def integrate_phi(params: ProblemParams) -> RadialProfile:
    """Ground-state profile from phi(0) = 1 to a little past its first zero.

    Raises :class:`ZeroNotFoundError` (with the last (r, phi)) when phi stays
    positive up to ``params.r_max``.
    """
    profile = shoot_profile(params, 1.0, params.r_max, past_zero=1.25)
    if profile.zero_index is None:
        raise ZeroNotFoundError(
            f"no zero of phi before r_max={params.r_max:g}",
            r=profile.r_stop, value=float(profile.values[-1]))
    return profile


def first_zero(profile: RadialProfile) -> tuple[float, float]:
    """First zero ``r_star`` of the profile and ``alpha_star = -phi'(r_star)``.

    The zero is bracketed by the first sign change between nodes and refined
    by bisection on the dense output down to ``tol_root / 4``.
    """
    vals = profile.values
    idx = np.nonzero((vals[:-1] > 0.0) & (vals[1:] <= 0.0))[0]
    if idx.size == 0:
        raise ZeroNotFoundError("profile has no sign change",
                                r=profile.r_stop, value=float(vals[-1]))
    i = int(idx[0])
    lo, hi = float(profile.nodes[i]), float(profile.nodes[i + 1])
    width = 0.25 * profile.params.tol_root
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if profile(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    r_star = 0.5 * (lo + hi)
    alpha_star = -profile.derivative(r_star)
    if not alpha_star > 0.0:
        raise IntegrationError("tangential zero detected", r=r_star, value=profile(r_star))
    return r_star, alpha_star


@dataclass(frozen=True, eq=False)
class GroundState:
    """First zero, slope there and the quantized constants of the profile.

    ``lambda_flux`` is the flux omega * alpha * r^(n-1) and
    ``lambda_flux_quad`` the same constant as an integral of phi^gamma;
    ``lambda_mass`` integrates the scale-invariant density phi^(n(gamma-1)/2).
    """

    r_star: float
    alpha_star: float
    lambda_flux: float
    lambda_mass: float
    lambda_flux_quad: float
    profile: RadialProfile = field(repr=False)
    q: float

    @property
    def params(self) -> ProblemParams:
        return self.profile.params

    @property
    def flux_gap(self) -> float:
        return abs(self.lambda_flux - self.lambda_flux_quad) / self.lambda_flux


def ground_state(params: ProblemParams) -> GroundState:
    profile = integrate_phi(params)
    r_star, alpha_star = first_zero(profile)
    n, gamma = params.n, params.gamma
    omega = unit_sphere_area(n)
    return GroundState(
        r_star=r_star,
        alpha_star=alpha_star,
        lambda_flux=omega * alpha_star * r_star ** (n - 1),
        lambda_mass=omega * profile.moment(params.mass_exponent, n - 1, 0.0, r_star),
        lambda_flux_quad=omega * profile.moment(gamma, n - 1, 0.0, r_star),
        profile=profile,
        q=params.q,
    )
