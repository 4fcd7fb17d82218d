"""Adaptive quadrature on finite and semi-infinite intervals.

Backed by QUADPACK's adaptive Gauss-Kronrod rule (``scipy.integrate.quad``);
any convergence warning is promoted to :class:`AccuracyError`.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from ..errors import AccuracyError, DomainError

MAX_SUBINTERVALS = 500


def quadrature(f, a: float, b: float, tol: float = 1e-10, limit: int = MAX_SUBINTERVALS) -> float:
    """Integrate ``f`` over [a, b] to relative error ``tol``."""
    if not tol > 0:
        raise DomainError("quadrature tolerance must be positive")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("use quadrature_semi_infinite for unbounded ranges")
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(lambda x: float(f(x)), a, b, epsabs=0.0, epsrel=tol, limit=limit)
        except integrate.IntegrationWarning as exc:
            raise AccuracyError(f"adaptive quadrature did not converge: {exc}") from exc
    if not math.isfinite(value) or err > max(tol * abs(value), 1e-300):
        raise AccuracyError(f"quadrature error estimate {err:.3g} exceeds tolerance")
    return value


def compactify(f):
    """Return g on [0, pi] with int_0^inf f(rho) drho = int_0^pi g(theta) dtheta.

    Uses rho = tan(theta / 2), so drho = (1 + rho^2) / 2 dtheta.
    """

    def g(theta):
        rho = np.tan(0.5 * theta)
        return np.asarray(f(rho)) * 0.5 * (1.0 + rho * rho)

    return g


def quadrature_semi_infinite(f, tol: float = 1e-10, limit: int = MAX_SUBINTERVALS) -> float:
    """Integrate ``f`` over [0, inf) through the compactifying map."""
    return quadrature(compactify(f), 0.0, math.pi, tol, limit)
