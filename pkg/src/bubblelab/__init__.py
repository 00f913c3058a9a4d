"""Numerical laboratory for -Δv = A(x) v_+^gamma under a mass constraint."""
__version__ = "0.1.0"

from .errors import DomainError, IntegrationError, ZeroNotFoundError
from .kernels import BACKEND
from .ode_core import (GroundState, ProblemParams, RadialProfile, first_zero,
                       ground_state, integrate_phi, series_start, unit_sphere_area)
from .solution_family import (EntireSolution, FarField, entire_solution, eval_entire,
                              far_field_constants, newton_potential,
                              representation_residual, scale_action, total_mass)
from .ball_lab import (ASpec, BallSolution, BlowupReport, EpsRegReport, SupInfReport,
                       blowup_family, eps_regularity_probe, mass_in_ball, shoot_ball,
                       sup_inf_probe)

__all__ = [
    "ASpec", "BACKEND", "BallSolution", "BlowupReport", "DomainError", "EntireSolution",
    "EpsRegReport", "FarField", "GroundState", "IntegrationError", "ProblemParams",
    "RadialProfile", "SupInfReport", "ZeroNotFoundError", "blowup_family",
    "entire_solution", "eps_regularity_probe", "eval_entire", "far_field_constants",
    "first_zero", "ground_state", "integrate_phi", "mass_in_ball", "newton_potential",
    "representation_residual", "scale_action", "series_start", "shoot_ball",
    "sup_inf_probe", "total_mass", "unit_sphere_area",
]
