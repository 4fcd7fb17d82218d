"""Zero-energy Maxwell fish-eye states and their supersymmetric partners."""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    DomainError,
    MFError,
    NonNormalizableError,
    NotFoundError,
    SearchError,
    SingularityError,
    WrongBranchError,
)
from .fisheye import (
    EnergyScale,
    LensModel,
    QuantumNumbers,
    coupling_constant,
    degeneracy,
    ground_factor,
    normalization,
    radial_R,
    radial_u,
    xi_of_rho,
)
from .grid import RadialGrid
from .numeric import find_critical_l, integrate_radial, pocket_analysis, solve_continuum, solve_coupling
from .specfun import GegenbauerIndex, gegenbauer
from .susy import superpotential, u_eff
