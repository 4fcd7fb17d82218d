"""ODE integration, shooting, quadrature and the partner-potential critical point."""

from .critical import (
    CriticalPoint,
    PocketReport,
    find_critical_l,
    partner_l_derivatives,
    partner_rho_derivatives,
    pocket_analysis,
    stationary_points,
)
from .integrate import RadialSolution, integrate_radial, numerov, solve_continuum
from .quadrature import quadrature, quadrature_semi_infinite
from .shooting import ShootingResult, match_mismatch, solve_coupling

__all__ = [
    "CriticalPoint",
    "PocketReport",
    "RadialSolution",
    "ShootingResult",
    "find_critical_l",
    "integrate_radial",
    "match_mismatch",
    "numerov",
    "partner_l_derivatives",
    "partner_rho_derivatives",
    "pocket_analysis",
    "quadrature",
    "quadrature_semi_infinite",
    "solve_continuum",
    "solve_coupling",
    "stationary_points",
]
