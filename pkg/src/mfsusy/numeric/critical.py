"""Critical angular number and pocket structure of the partner potential.

With l promoted to a real parameter, the partner potential is

    U+(rho; l) = a(l) A(rho) - b(l) B(rho) + c(l) C(rho)

where a = l(l-1), b = (2l+1)(2l-3), c = 2(2l+1), A = rho^-2,
B = (1+rho^2)^-2 and C = A B. A pocket (a local minimum behind a barrier)
exists once l passes the fold point where dU/drho and d2U/drho2 vanish
together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..errors import AccuracyError, DomainError, NotFoundError
from ..grid import RadialGrid

__all__ = [
    "CriticalPoint",
    "PocketReport",
    "partner_rho_derivatives",
    "partner_l_derivatives",
    "find_critical_l",
    "pocket_analysis",
    "stationary_points",
]

SCAN_L = (4.0, 10.0)
SCAN_RHO = (0.5, 4.0)
POCKET_SCAN = (0.2, 10.0)


def _coefficients(l):
    return l * (l - 1.0), (2 * l + 1.0) * (2 * l - 3.0), 2.0 * (2 * l + 1.0)


def _coefficients_dl(l):
    return 2 * l - 1.0, 8 * l - 4.0, 4.0


def _basis(rho, order):
    """Derivatives 0..order of A, B and C as arrays of shape (order+1, ...)."""
    rho = np.asarray(rho, dtype=float)
    s = 1.0 + rho * rho
    A = [(-1) ** k * math.factorial(k + 1) * rho ** (-2.0 - k) for k in range(order + 1)]
    B_all = [
        s**-2,
        -4.0 * rho * s**-3,
        -4.0 * s**-3 + 24.0 * rho * rho * s**-4,
        72.0 * rho * s**-4 - 192.0 * rho**3 * s**-5,
    ]
    if order > 3:
        raise DomainError("derivatives above third order are not implemented")
    B = B_all[: order + 1]
    C = [sum(math.comb(k, j) * A[j] * B[k - j] for j in range(k + 1)) for k in range(order + 1)]
    return np.array(A), np.array(B), np.array(C)


def partner_rho_derivatives(l, rho, order=3):
    """[U+, dU+/drho, ..., d^order U+/drho^order] at (l, rho)."""
    A, B, C = _basis(rho, order)
    a, b, c = _coefficients(l)
    return a * A - b * B + c * C


def partner_l_derivatives(l, rho, order=2):
    """[dU+/dl, d2U+/(dl drho), ...] up to ``order`` rho-derivatives."""
    A, B, C = _basis(rho, order)
    a, b, c = _coefficients_dl(l)
    return a * A - b * B + c * C


@dataclass(frozen=True)
class CriticalPoint:
    """Stationary inflexion point of the partner potential."""

    l_cr: float
    rho_cr: float
    grad_residuals: tuple
    method: str = "newton"
    iterations: int = 0


@dataclass(frozen=True)
class PocketReport:
    """Extrema of U+(., l) on the scan window.

    ``minimum`` and ``maximum`` are ``(rho, U)`` pairs or ``None``;
    ``depth`` is U_max - U_min when both exist.
    """

    l: float
    minimum: tuple | None
    maximum: tuple | None
    depth: float | None
    stationary: tuple = field(default=())

    @property
    def has_pocket(self) -> bool:
        return self.minimum is not None and self.maximum is not None


def stationary_points(l, scan: RadialGrid | np.ndarray):
    """Roots of dU+/drho on the scan, refined by bisection, as (rho, kind) pairs."""
    pts = scan.points if isinstance(scan, RadialGrid) else np.asarray(scan, dtype=float)
    d1 = partner_rho_derivatives(l, pts, 1)[1]
    out = []
    for i in np.nonzero(np.sign(d1[:-1]) * np.sign(d1[1:]) < 0)[0]:
        r = brentq(lambda x: partner_rho_derivatives(l, x, 1)[1], pts[i], pts[i + 1], xtol=1e-14, rtol=1e-14)
        out.append((r, "min" if d1[i] < 0 else "max"))
    return out


def pocket_analysis(l, scan: RadialGrid | None = None) -> PocketReport:
    """Locate the pocket minimum and barrier maximum of U+(., l).

    ``scan`` must cover [0.2, 10]; the default is 4000 log-spaced points.
    The first minimum and the first maximum after it form the pocket.
    """
    if scan is None:
        scan = RadialGrid.logarithmic(*POCKET_SCAN, 4000)
    if scan.start > POCKET_SCAN[0] or scan.stop < POCKET_SCAN[1]:
        raise DomainError("pocket scan must cover [0.2, 10]")
    stat = stationary_points(l, scan)
    minimum = maximum = None
    for r, kind in stat:
        if kind == "min" and minimum is None:
            minimum = (r, float(partner_rho_derivatives(l, r, 0)[0]))
        elif kind == "max" and minimum is not None and maximum is None:
            maximum = (r, float(partner_rho_derivatives(l, r, 0)[0]))
    depth = maximum[1] - minimum[1] if minimum and maximum else None
    return PocketReport(float(l), minimum, maximum, depth, tuple(stat))


def _residual(l, rho):
    d = partner_rho_derivatives(l, rho, 2)
    return np.array([d[1], d[2]])


def _jacobian(l, rho):
    d = partner_rho_derivatives(l, rho, 3)
    dl = partner_l_derivatives(l, rho, 2)
    return np.array([[dl[1], d[2]], [dl[2], d[3]]])


def _seed():
    ls = np.linspace(*SCAN_L, 121)
    rhos = np.linspace(*SCAN_RHO, 701)
    prev = None
    for l in ls:
        stat = stationary_points(l, rhos)
        if len(stat) >= 2:
            if prev is None:
                break
            return 0.5 * (prev + l), 0.5 * (stat[0][0] + stat[1][0])
        prev = l
    raise NotFoundError(
        "no onset of a pocket in the scan window",
        {"l_window": SCAN_L, "rho_window": SCAN_RHO},
    )


def _newton(l, rho, tol, max_iter=50):
    F = _residual(l, rho)
    for it in range(1, max_iter + 1):
        try:
            step = np.linalg.solve(_jacobian(l, rho), -F)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        norm = np.linalg.norm(F)
        while lam > 1e-6:
            l_new, rho_new = l + lam * step[0], rho + lam * step[1]
            if rho_new > 0:
                F_new = _residual(l_new, rho_new)
                if np.linalg.norm(F_new) < norm or np.linalg.norm(F_new) <= tol:
                    break
            lam *= 0.5
        else:
            return None
        l, rho, F = l_new, rho_new, F_new
        if np.all(np.abs(F) < tol) and np.max(np.abs(lam * step)) < 1e-10 * max(1.0, abs(l)):
            return l, rho, F, it
    if np.all(np.abs(F) < tol):
        return l, rho, F, max_iter
    return None


def _rho_of_max_slope(l):
    # rho maximizing dU+/drho inside the window, where d2U+/drho2 = 0
    rhos = np.linspace(*SCAN_RHO, 701)
    d1 = partner_rho_derivatives(l, rhos, 1)[1]
    i = int(np.argmax(d1))
    if i == 0 or i == rhos.size - 1:
        return float(rhos[i])
    f = lambda x: partner_rho_derivatives(l, x, 2)[2]
    return brentq(f, rhos[i - 1], rhos[i + 1], xtol=1e-15, rtol=1e-15)


def _bisection():
    ls = np.linspace(*SCAN_L, 121)
    disc = [partner_rho_derivatives(l, _rho_of_max_slope(l), 1)[1] for l in ls]
    idx = [i for i in range(len(ls) - 1) if disc[i] < 0 <= disc[i + 1]]
    if not idx:
        raise NotFoundError("stationary-point discriminant never changes sign in the scan window")
    i = idx[0]
    g = lambda l: partner_rho_derivatives(l, _rho_of_max_slope(l), 1)[1]
    l = brentq(g, ls[i], ls[i + 1], xtol=1e-15, rtol=1e-15)
    rho = _rho_of_max_slope(l)
    return l, rho, _residual(l, rho)


def find_critical_l(tol=1e-8, method="newton") -> CriticalPoint:
    """Solve dU+/drho = d2U+/drho2 = 0 for (l, rho).

    Damped Newton with the analytic Jacobian, seeded from a coarse scan of
    l in [4, 10], rho in [0.5, 4]. If Newton fails (or ``method`` is
    ``'bisection'``) the root is found instead by nested bisection: the
    inner solve finds where dU+/drho peaks, the outer solve finds the l at
    which that peak touches zero.

    Raises
    ------
    NotFoundError
        No pocket onset inside the scan window.
    AccuracyError
        Final residuals exceed ``tol``.
    """
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if method not in ("newton", "bisection"):
        raise DomainError(f"unknown method {method!r}")
    result = None
    if method == "newton":
        l0, rho0 = _seed()
        result = _newton(l0, rho0, tol)
    if result is not None:
        l, rho, F, it = result
        used = "newton"
    else:
        l, rho, F = _bisection()
        it, used = 0, "bisection"
    if not np.all(np.abs(F) < tol):
        raise AccuracyError(f"critical-point residuals {F.tolist()} exceed tolerance {tol:g}")
    return CriticalPoint(float(l), float(rho), (float(F[0]), float(F[1])), used, it)
