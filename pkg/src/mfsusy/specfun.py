"""Gegenbauer (ultraspherical) polynomials and their differential equation.

The polynomials are evaluated by the forward three-term recurrence, which is
stable on [-1, 1] for the degrees and parameters used by the fish-eye states.
Derivatives use the raising identity d/dx C_p^q = 2q C_{p-1}^{q+1}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExtrapolationWarning, SingularityError

__all__ = [
    "GegenbauerIndex",
    "gegenbauer",
    "gegenbauer_deriv",
    "gegenbauer_deriv2",
    "ultraspherical_coefficients",
    "ultraspherical_terms",
    "ultraspherical_residual",
]


@dataclass(frozen=True)
class GegenbauerIndex:
    """Degree ``p`` and parameter ``q`` of C_p^q.

    For the fish-eye radial states ``p`` is the radial quantum number and
    ``q = l + 1``.
    """

    p: int
    q: float

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise DomainError(f"Gegenbauer degree must be a nonnegative integer, got {self.p!r}")
        if not self.q > 0:
            raise DomainError(f"Gegenbauer parameter must be positive, got {self.q!r}")
        object.__setattr__(self, "p", int(self.p))

    @classmethod
    def for_state(cls, n_r: int, l: int) -> "GegenbauerIndex":
        return cls(n_r, l + 1)

    @property
    def l(self) -> float:
        return self.q - 1


def _check_interval(xi):
    if np.any(np.abs(xi) > 1.0):
        warnings.warn(
            "Gegenbauer evaluation outside [-1, 1]; result is a polynomial extrapolation",
            ExtrapolationWarning,
            stacklevel=3,
        )


def _recurrence(p, q, xi):
    c_prev = np.ones_like(xi)
    if p == 0:
        return c_prev
    c = 2.0 * q * xi
    for k in range(2, p + 1):
        c_prev, c = c, (2.0 * (k + q - 1.0) * xi * c - (k + 2.0 * q - 2.0) * c_prev) / k
    return c


def gegenbauer(idx: GegenbauerIndex, xi):
    """Evaluate C_p^q(xi) by forward recurrence.

    Parameters
    ----------
    idx : GegenbauerIndex
        Degree and parameter.
    xi : float or array_like
        Argument. Values with ``|xi| > 1`` are evaluated but raise an
        :class:`ExtrapolationWarning`.

    Returns
    -------
    float or ndarray
    """
    x = np.asarray(xi, dtype=float)
    _check_interval(x)
    out = _recurrence(idx.p, idx.q, x)
    return out if out.ndim else float(out)


def gegenbauer_deriv(idx: GegenbauerIndex, xi):
    """First derivative dC_p^q/dxi = 2q C_{p-1}^{q+1}(xi)."""
    x = np.asarray(xi, dtype=float)
    _check_interval(x)
    if idx.p == 0:
        out = np.zeros_like(x)
    else:
        out = 2.0 * idx.q * _recurrence(idx.p - 1, idx.q + 1, x)
    return out if out.ndim else float(out)


def gegenbauer_deriv2(idx: GegenbauerIndex, xi):
    """Second derivative, 4q(q+1) C_{p-2}^{q+2}(xi)."""
    x = np.asarray(xi, dtype=float)
    _check_interval(x)
    if idx.p < 2:
        out = np.zeros_like(x)
    else:
        out = 4.0 * idx.q * (idx.q + 1.0) * _recurrence(idx.p - 2, idx.q + 2, x)
    return out if out.ndim else float(out)


def ultraspherical_coefficients(idx: GegenbauerIndex, xi):
    """Coefficients (P, Q_l, R_p) of the ultraspherical equation at ``xi``.

    P = 1, Q_l = (2l+3) xi / (xi^2 - 1), R_p = -p (2q+p) / (xi^2 - 1), with
    l = q - 1.
    """
    x = np.asarray(xi, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise SingularityError("ultraspherical coefficients diverge at xi = +-1")
    denom = x * x - 1.0
    l = idx.q - 1.0
    P = np.ones_like(x)
    Q = (2.0 * l + 3.0) * x / denom
    R = -idx.p * (2.0 * idx.q + idx.p) / denom
    return P, Q, R


def ultraspherical_terms(idx: GegenbauerIndex, xi):
    """The three terms P C'', Q C', R C whose sum is the equation residual."""
    P, Q, R = ultraspherical_coefficients(idx, xi)
    x = np.asarray(xi, dtype=float)
    return (
        P * _as_array(gegenbauer_deriv2(idx, x)),
        Q * _as_array(gegenbauer_deriv(idx, x)),
        R * _as_array(gegenbauer(idx, x)),
    )


def _as_array(v):
    return np.asarray(v, dtype=float)


def ultraspherical_residual(idx: GegenbauerIndex, xi, relative: bool = False):
    """Residual of C_p^q in P C'' + Q_l C' + R_p C = 0.

    With ``relative=True`` the residual is divided by the largest of the three
    term magnitudes, which keeps the check meaningful near ``xi = +-1`` where
    the coefficients blow up. A residual with all terms zero is reported as 0.
    """
    t1, t2, t3 = ultraspherical_terms(idx, xi)
    res = t1 + t2 + t3
    if relative:
        scale = np.maximum(np.maximum(np.abs(t1), np.abs(t2)), np.abs(t3))
        res = np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), 0.0)
    res = np.asarray(res)
    return res if res.ndim else float(res)
