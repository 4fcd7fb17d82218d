"""Supersymmetric structure of the ground (R0 = 0) sector.

The ground-sector solution f_l(rho) defines the superpotential
W = -(ln f_l)'. The two partner potentials follow from the Riccati pair
U- = W^2 - W' and U+ = W^2 + W', and factorize as H- = A^dagger A and
H+ = A A^dagger with A = d/drho + W.

Every derivative of a closed-form expression here is analytic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, StencilError
from .fisheye import ground_factor, xi_of_rho

__all__ = [
    "PartnerKind",
    "FactorOp",
    "SectorSpec",
    "SampledFunction",
    "natanzon_Q",
    "natanzon_Rp",
    "xi_derivatives",
    "f_from_Q",
    "log_ground_factor_derivatives",
    "natanzon_residuals",
    "superpotential",
    "superpotential_deriv",
    "superpotential_from_f",
    "u_eff",
    "u_minus",
    "u_plus",
    "riccati_residual",
    "riccati_terms",
    "apply_factor_op",
    "compose_factor_ops",
    "ground_annihilation_residual",
]


class PartnerKind(str, enum.Enum):
    MINUS = "minus"
    PLUS = "plus"


class FactorOp(str, enum.Enum):
    A = "A"
    A_DAGGER = "A_dagger"


@dataclass(frozen=True)
class SectorSpec:
    """Ground sector of angular number ``l``: n = l + 1, C_0 = 1."""

    l: int
    sector: str = "R0"

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a nonnegative integer, got {self.l!r}")
        if self.sector != "R0":
            raise DomainError(f"only the R0 sector is supported, got {self.sector!r}")

    @property
    def n(self) -> int:
        return self.l + 1

    @property
    def n_r(self) -> int:
        return 0


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A radial function known only on grid points."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if pts.shape != vals.shape or pts.ndim != 1:
            raise DomainError("points and values must be 1-d arrays of equal length")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)


def _out(a):
    a = np.asarray(a)
    return a if a.ndim else float(a)


def _positive(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise SingularityError("expression is singular at rho = 0")
    return rho


def _open_interval(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi) >= 1.0):
        raise SingularityError("Natanzon coefficients are singular at xi = +-1")
    return xi


def natanzon_Q(l, xi):
    """Q_l(xi) = (2l + 3) xi / (xi^2 - 1)."""
    xi = _open_interval(xi)
    return _out((2 * l + 3) * xi / (xi * xi - 1.0))


def natanzon_Rp(p, q, xi):
    """R_p(xi) = -p (2q + p) / (xi^2 - 1); zero in the p = 0 sector."""
    xi = _open_interval(xi)
    return _out(-p * (2.0 * q + p) / (xi * xi - 1.0) + 0.0 * xi)


def xi_derivatives(rho):
    """First and second derivatives of xi(rho) = (1 - rho^2)/(1 + rho^2)."""
    rho = np.asarray(rho, dtype=float)
    s = 1.0 + rho * rho
    d1 = -4.0 * rho / s**2
    d2 = -4.0 * (1.0 - 3.0 * rho * rho) / s**3
    return _out(d1), _out(d2)


def f_from_Q(l, rho):
    """Prefactor rebuilt from Q_l: |xi'|^(-1/2) exp(1/2 int^xi Q_l dxi).

    The antiderivative (2l+3)/2 ln(1 - xi^2) is used in closed form. The
    result is 2^(l + 1/2) times ``ground_factor(l, rho)``.
    """
    rho = _positive(rho)
    xi = np.asarray(xi_of_rho(rho))
    d1, _ = xi_derivatives(rho)
    # 1 - xi^2 = 4 rho^2 / (1 + rho^2)^2 without cancellation
    one_minus_xi2 = 4.0 * rho * rho / (1.0 + rho * rho) ** 2
    integral = 0.5 * (2 * l + 3) * np.log(one_minus_xi2)
    return _out(np.abs(d1) ** -0.5 * np.exp(0.5 * integral) + 0.0 * xi)


def log_ground_factor_derivatives(l, rho):
    """(f'/f, f''/f) for the ground factor f_l, analytically."""
    rho = _positive(rho)
    s = 1.0 + rho * rho
    g = (l + 1) / rho - (2 * l + 1) * rho / s
    dg = -(l + 1) / rho**2 - (2 * l + 1) * (1.0 - rho * rho) / s**2
    return _out(g), _out(dg + g * g)


def natanzon_residuals(l, rho, relative: bool = False):
    """Residuals of the two point-transformation conditions in the R0 sector.

    Returns ``(first, second)`` with

    first  = xi''/xi'^2 + 2 f'/(xi' f) - Q_l(xi)
    second = f''/(xi'^2 f) - U-/xi'^2            (R_0 = 0)

    Both sides scale like rho^6 at large rho through 1/xi'^2, so
    ``relative=True`` divides each residual by its largest term.
    """
    rho = _positive(rho)
    d1, d2 = xi_derivatives(rho)
    g, f2 = log_ground_factor_derivatives(l, rho)
    xi = np.asarray(xi_of_rho(rho))
    terms1 = (d2 / d1**2, 2.0 * np.asarray(g) / d1, -np.asarray(natanzon_Q(l, xi)))
    terms2 = (np.asarray(f2) / d1**2, -np.asarray(u_minus(l, rho)) / d1**2)
    first, second = sum(terms1), sum(terms2)
    if relative:
        first = first / np.maximum.reduce([np.abs(t) for t in terms1])
        second = second / np.maximum.reduce([np.abs(t) for t in terms2])
    return _out(first), _out(second)


def superpotential(l, rho):
    """W(rho) = l/rho - (2l + 1) / (rho (1 + rho^2))."""
    rho = _positive(rho)
    return _out(l / rho - (2 * l + 1) / (rho * (1.0 + rho * rho)))


def superpotential_deriv(l, rho):
    """dW/drho = -l/rho^2 + (2l + 1)(1 + 3 rho^2) / (rho^2 (1 + rho^2)^2)."""
    rho = _positive(rho)
    r2 = rho * rho
    return _out(-l / r2 + (2 * l + 1) * (1.0 + 3.0 * r2) / (r2 * (1.0 + r2) ** 2))


def superpotential_from_f(l, rho):
    """W = -d/drho ln f_l, from the analytic logarithmic derivative."""
    g, _ = log_ground_factor_derivatives(l, rho)
    return _out(-np.asarray(g))


def u_minus(l, rho):
    """Bosonic effective potential l(l+1)/rho^2 - (2l+1)(2l+3)/(1+rho^2)^2."""
    rho = _positive(rho)
    return _out(l * (l + 1) / rho**2 - (2 * l + 1) * (2 * l + 3) / (1.0 + rho * rho) ** 2)


def u_plus(l, rho):
    """Fermionic partner potential.

    l(l-1)/rho^2 - (2l+1)(2l-3)/(1+rho^2)^2 + 2(2l+1)/(rho^2 (1+rho^2)^2).
    ``l`` may be any real number.
    """
    rho = _positive(rho)
    r2 = rho * rho
    s2 = (1.0 + r2) ** 2
    return _out(l * (l - 1) / r2 - (2 * l + 1) * (2 * l - 3) / s2 + 2 * (2 * l + 1) / (r2 * s2))


def u_eff(kind, l, rho):
    """Partner potential of the given kind ('minus' or 'plus')."""
    kind = PartnerKind(kind)
    return u_minus(l, rho) if kind is PartnerKind.MINUS else u_plus(l, rho)


def riccati_terms(kind, l, rho):
    """(U, W^2, +-W') where U = W^2 -+ W' for the two kinds."""
    kind = PartnerKind(kind)
    W = np.asarray(superpotential(l, rho))
    dW = np.asarray(superpotential_deriv(l, rho))
    sign = -1.0 if kind is PartnerKind.MINUS else 1.0
    return np.asarray(u_eff(kind, l, rho)), W * W, sign * dW


def riccati_residual(kind, l, rho, relative: bool = False):
    """U-(rho) - (W^2 - W') or U+(rho) - (W^2 + W').

    ``relative=True`` divides by the largest of |U|, W^2 and |W'|.
    """
    U, W2, dW = riccati_terms(kind, l, rho)
    res = U - (W2 + dW)
    if relative:
        res = res / np.maximum(np.maximum(np.abs(U), W2), np.abs(dW))
    return _out(res)


# Finite-difference weights for first derivatives.
_D1_UNIFORM = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def _sampled_derivative(u: SampledFunction, rho):
    pts, vals = u.points, u.values
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    idx = np.searchsorted(pts, rho)
    ok = (idx < pts.size) & np.isclose(pts[np.minimum(idx, pts.size - 1)], rho, rtol=1e-12, atol=0.0)
    if not np.all(ok):
        raise StencilError("numeric path requires rho to be grid points")
    diffs = np.diff(pts)
    uniform = np.allclose(diffs, diffs[0], rtol=1e-9, atol=0.0)
    if uniform:
        if np.any((idx < 2) | (idx > pts.size - 3)):
            raise StencilError("5-point stencil reaches past the grid boundary")
        h = diffs[0]
        du = sum(c * vals[idx + k] for c, k in zip(_D1_UNIFORM, range(-2, 3))) / h
    else:
        if np.any((idx < 1) | (idx > pts.size - 2)):
            raise StencilError("3-point stencil reaches past the grid boundary")
        hm = pts[idx] - pts[idx - 1]
        hp = pts[idx + 1] - pts[idx]
        du = (
            -hp / (hm * (hm + hp)) * vals[idx - 1]
            + (hp - hm) / (hm * hp) * vals[idx]
            + hm / (hp * (hm + hp)) * vals[idx + 1]
        )
    return vals[idx], du


def apply_factor_op(direction, l, u, rho, du=None):
    """Apply A = d/drho + W or A^dagger = -d/drho + W to a radial function.

    Parameters
    ----------
    direction : {'A', 'A_dagger'}
    l : int
        Angular number selecting the superpotential.
    u : callable or SampledFunction
        Analytic path: a callable ``u(rho)``; its derivative must be given
        as ``du``. Numeric path: a :class:`SampledFunction`, in which case
        ``rho`` must be interior grid points. The derivative is a 5-point
        central difference on uniform grids and a 3-point nonuniform
        difference otherwise.
    rho : float or array_like
    du : callable, optional
        Derivative of ``u`` on the analytic path.
    """
    direction = FactorOp(direction)
    if isinstance(u, SampledFunction):
        val, der = _sampled_derivative(u, rho)
        if np.ndim(rho) == 0:
            val, der = val[0], der[0]
    else:
        if du is None:
            raise DomainError("analytic path needs the derivative du")
        val, der = np.asarray(u(rho), dtype=float), np.asarray(du(rho), dtype=float)
    W = np.asarray(superpotential(l, rho))
    sign = 1.0 if direction is FactorOp.A else -1.0
    return _out(sign * der + W * val)


def compose_factor_ops(order, l, v, dv, d2v, rho):
    """(A^dagger A v) for order 'AdA' or (A A^dagger v) for order 'AAd'.

    The inner operator is applied analytically and differentiated once more
    with the product rule, so ``v``, ``v'`` and ``v''`` are all needed.
    """
    rho = _positive(rho)
    W = np.asarray(superpotential(l, rho))
    dW = np.asarray(superpotential_deriv(l, rho))
    v0, v1, v2 = (np.asarray(f(rho), dtype=float) for f in (v, dv, d2v))
    if order == "AdA":
        g, dg = v1 + W * v0, v2 + dW * v0 + W * v1
        return _out(-dg + W * g)
    if order == "AAd":
        g, dg = -v1 + W * v0, -v2 + dW * v0 + W * v1
        return _out(dg + W * g)
    raise DomainError(f"order must be 'AdA' or 'AAd', got {order!r}")


def ground_annihilation_residual(l, rho):
    """|A f_l| / max(|f_l'|, |W f_l|), pointwise."""
    rho = _positive(rho)
    f = np.asarray(ground_factor(l, rho))
    g, _ = log_ground_factor_derivatives(l, rho)
    df = np.asarray(g) * f
    W = np.asarray(superpotential(l, rho))
    Af = df + W * f
    return _out(np.abs(Af) / np.maximum(np.abs(df), np.abs(W * f)))
