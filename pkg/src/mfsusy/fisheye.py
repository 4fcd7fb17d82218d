"""The Maxwell fish-eye lens at zero energy.

Physical-form quantities (refractive index, classical potential) take a
:class:`LensModel`. Everything else works in the scaled radius
``rho = r / R`` with energies in units of E0 = hbar^2 / (2 m R^2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyWarning, DomainError, NonNormalizableError, OutsideLensWarning
from .grid import RadialGrid
from .specfun import GegenbauerIndex, gegenbauer

__all__ = [
    "QuantumNumbers",
    "LensModel",
    "EnergyScale",
    "RadialGrid",
    "refractive_index",
    "classical_potential",
    "mf_potential",
    "coupling_constant",
    "xi_of_rho",
    "ground_factor",
    "f_l",
    "radial_R",
    "radial_u",
    "normalization",
    "degeneracy",
    "schrodinger_residual",
    "schrodinger_terms",
]


@dataclass(frozen=True)
class QuantumNumbers:
    """Principal ``n``, angular ``l`` and radial ``n_r`` with n = n_r + l + 1."""

    n: int
    l: int
    n_r: int | None = None

    def __post_init__(self):
        n, l = self.n, self.l
        if int(n) != n or n < 1:
            raise DomainError(f"principal quantum number must be a positive integer, got {n!r}")
        if int(l) != l or l < 0:
            raise DomainError(f"angular quantum number must be a nonnegative integer, got {l!r}")
        if l > n - 1:
            raise DomainError(f"l = {l} exceeds n - 1 = {n - 1}")
        n_r = n - l - 1
        if self.n_r is not None and self.n_r != n_r:
            raise DomainError(f"inconsistent quantum numbers: n={n}, l={l}, n_r={self.n_r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "l", int(l))
        object.__setattr__(self, "n_r", int(n_r))

    @classmethod
    def from_radial(cls, n_r: int, l: int) -> "QuantumNumbers":
        return cls(n_r + l + 1, l)

    @property
    def coupling(self) -> float:
        return coupling_constant(self.n)

    @property
    def gegenbauer_index(self) -> GegenbauerIndex:
        return GegenbauerIndex(self.n_r, self.l + 1)


@dataclass(frozen=True)
class LensModel:
    """Lens radius ``R`` (length units) and dimensionless coupling ``w``."""

    R: float = 1.0
    w: float = 3.0

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"lens radius must be positive, got {self.R!r}")
        if not self.w > 0:
            raise DomainError(f"coupling constant must be positive, got {self.w!r}")

    def scaled(self, r):
        return np.asarray(r, dtype=float) / self.R


@dataclass(frozen=True)
class EnergyScale:
    """E0 = hbar^2 / (2 m R^2). All scaled outputs are multiples of ``E0``."""

    E0: float = 1.0

    def __post_init__(self):
        if not self.E0 > 0:
            raise DomainError("energy scale must be positive")

    @classmethod
    def from_constants(cls, hbar: float, mass: float, R: float) -> "EnergyScale":
        return cls(hbar**2 / (2.0 * mass * R**2))

    def to_physical(self, value):
        return np.asarray(value, dtype=float) * self.E0


def _scalar(a):
    a = np.asarray(a)
    return a if a.ndim else float(a)


def _nonnegative(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError(f"{name} must be nonnegative")
    return x


def refractive_index(r, model: LensModel):
    """n(r) = 2R^2 / (R^2 + r^2). Radii beyond R warn but are evaluated."""
    r = _nonnegative(r, "radius")
    if np.any(r > model.R):
        warnings.warn("radius outside the lens (r > R)", OutsideLensWarning, stacklevel=2)
    R2 = model.R**2
    return _scalar(2.0 * R2 / (R2 + r * r))


def classical_potential(r, model: LensModel):
    """Zero-energy classical analogue U(r) = -w / (2 R^2 (1 + r^2/R^2)^2)."""
    r = _nonnegative(r, "radius")
    s = 1.0 + (r / model.R) ** 2
    return _scalar(-model.w / (2.0 * model.R**2 * s * s))


def mf_potential(rho, w: float):
    """Scaled fish-eye potential -w / (1 + rho^2)^2 in E0 units."""
    rho = _nonnegative(rho, "rho")
    s = 1.0 + rho * rho
    return _scalar(-w / (s * s))


def coupling_constant(n: int) -> float:
    """Quantized coupling w_n = 4 n^2 - 1."""
    if int(n) != n or n < 1:
        raise DomainError(f"principal quantum number must be >= 1, got {n!r}")
    return float(4 * n * n - 1)


def xi_of_rho(rho):
    """Map (0, inf) onto (-1, 1]: xi = (1 - rho^2) / (1 + rho^2)."""
    rho = _nonnegative(rho, "rho")
    r2 = rho * rho
    return _scalar((1.0 - r2) / (1.0 + r2))


def ground_factor(l: int, rho):
    """Ground-sector prefactor rho^(l+1) / (1 + rho^2)^((2l+1)/2)."""
    rho = np.asarray(rho, dtype=float)
    return _scalar(rho ** (l + 1) / (1.0 + rho * rho) ** (l + 0.5))


f_l = ground_factor


def radial_R(qn: QuantumNumbers, rho, normalized: bool = False):
    """Radial part R_nl(rho) of the zero-energy bound states.

    Unnormalized states use N_nl = 1. Requesting ``normalized=True`` for
    l = 0 raises :class:`NonNormalizableError`.
    """
    rho = np.asarray(rho, dtype=float)
    N = normalization(qn) if normalized else 1.0
    l = qn.l
    poly = np.asarray(gegenbauer(qn.gegenbauer_index, xi_of_rho(rho)))
    return _scalar(N * rho**l / (1.0 + rho * rho) ** (l + 0.5) * poly)


def radial_u(qn: QuantumNumbers, rho, normalized: bool = False):
    """u_nl = rho R_nl = f_l(rho) C_{n_r}^{l+1}(xi(rho)) (times N_nl if normalized)."""
    rho = np.asarray(rho, dtype=float)
    N = normalization(qn) if normalized else 1.0
    poly = np.asarray(gegenbauer(qn.gegenbauer_index, xi_of_rho(rho)))
    return _scalar(N * np.asarray(ground_factor(qn.l, rho)) * poly)


def normalization(qn: QuantumNumbers, quad_tol: float = 1e-10) -> float:
    """N_nl with the radial measure: N^2 * int_0^inf R^2 rho^2 drho = 1.

    The integral runs over theta in [0, pi) after rho = tan(theta / 2); note
    that cos(theta) is exactly xi(rho).
    """
    if qn.l < 1:
        raise NonNormalizableError(
            f"state n={qn.n}, l=0 is not normalizable: u(rho) tends to a constant at infinity"
        )
    return _normalization(qn.n, qn.l, float(quad_tol))


@lru_cache(maxsize=256)
def _normalization(n, l, quad_tol):
    from .numeric.quadrature import quadrature_semi_infinite

    qn = QuantumNumbers(n, l)
    norm2 = quadrature_semi_infinite(lambda x: np.asarray(radial_u(qn, x)) ** 2, quad_tol)
    return 1.0 / math.sqrt(norm2)


def degeneracy(n: int) -> int:
    """Number of (l, m) states sharing principal number n, i.e. n^2."""
    if int(n) != n or n < 1:
        raise DomainError(f"principal quantum number must be >= 1, got {n!r}")
    return int(n) * int(n)


# 7-point central stencil for the second derivative, error O(h^6)
_D2_WEIGHTS = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0
_D2_OFFSETS = np.arange(-3, 4)


def _second_derivative(fn, rho, h):
    rho = np.asarray(rho, dtype=float)
    samples = [np.asarray(fn(rho + k * h)) for k in _D2_OFFSETS]
    return sum(wt * s for wt, s in zip(_D2_WEIGHTS, samples)) / (h * h)


def _fd_step(rho):
    # relative step: the closed forms vary on the scale of rho itself
    return 5e-3 * rho


def schrodinger_terms(qn: QuantumNumbers, rho):
    """Kinetic, centrifugal and coupling terms of the radial operator acting on u_nl.

    The second derivative comes from a 7-point finite-difference stencil of
    the closed form.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("rho must be positive")
    h = _fd_step(rho)
    if np.any(rho < 1e-6):
        warnings.warn("finite-difference step underflows near rho = 0", AccuracyWarning, stacklevel=3)
    u = np.asarray(radial_u(qn, rho))
    kinetic = -_second_derivative(lambda x: radial_u(qn, x), rho, h)
    centrifugal = qn.l * (qn.l + 1) / (rho * rho) * u
    coupling = -coupling_constant(qn.n) / (1.0 + rho * rho) ** 2 * u
    return kinetic, centrifugal, coupling


def schrodinger_residual(qn: QuantumNumbers, rho, relative: bool = False):
    """[-d^2/drho^2 + l(l+1)/rho^2 - (4n^2-1)/(1+rho^2)^2] u_nl(rho).

    With ``relative=True`` the value is divided by the largest local term
    magnitude. The potential terms use the largest |u| over the stencil, so
    the scale stays meaningful at a node where u itself vanishes.
    """
    t = schrodinger_terms(qn, rho)
    res = t[0] + t[1] + t[2]
    if relative:
        rho = np.asarray(rho, dtype=float)
        h = _fd_step(rho)
        env = np.max([np.abs(np.asarray(radial_u(qn, rho + k * h))) for k in _D2_OFFSETS], axis=0)
        pot = (qn.l * (qn.l + 1) / (rho * rho) + coupling_constant(qn.n) / (1.0 + rho * rho) ** 2) * env
        scale = np.maximum(np.abs(t[0]), pot)
        res = np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), 0.0)
    return _scalar(res)
