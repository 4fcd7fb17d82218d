"""Coupling-constant eigenvalues of the zero-energy problem by shooting.

For fixed l the regular solution from the origin and the decaying solution
from the tail are matched at rho = 1. The mismatch is measured by the
normalized Wronskian

    D(w) = (u_o u_i' - u_o' u_i) / sqrt((u_o^2 + u_o'^2)(u_i^2 + u_i'^2)),

which is continuous in w and vanishes exactly at the eigenvalues. Roots
are bracketed on a scan, refined with Brent's method, and the branch is
chosen by counting nodes of the stitched eigenfunction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import DomainError, SearchError, WrongBranchError
from ..grid import RadialGrid
from .integrate import (
    ORIGIN_SEED,
    TAIL_SEED,
    RadialSolution,
    count_nodes,
    loglog_slope,
    numerov,
    series_solution,
    zero_energy_g,
    _mf_coupling_coeffs,
)

__all__ = ["ShootingResult", "ShootingSetup", "match_mismatch", "solve_coupling"]

MATCH_POINT = 1.0
_D1_5PT = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


@dataclass(frozen=True)
class ShootingSetup:
    """Uniform outward grid (0, 1 + 2h] and inward grid [1 - 2h, rho_outer]."""

    step: float = 1e-3
    rho_outer: float = TAIL_SEED

    def __post_init__(self):
        n = 1.0 / self.step
        if self.step <= 0 or abs(n - round(n)) > 1e-9 or round(n) < 20:
            raise DomainError("shooting step must be 1/N with N >= 20")
        if self.rho_outer < 2.0:
            raise DomainError("outer radius must be at least 2")

    @property
    def outward_grid(self) -> RadialGrid:
        n = int(round(1.0 / self.step))
        return RadialGrid(self.step * np.arange(1, n + 3), "uniform", self.step)

    @property
    def inward_grid(self) -> RadialGrid:
        n = int(round((self.rho_outer - MATCH_POINT) / self.step))
        return RadialGrid(MATCH_POINT + self.step * np.arange(-2, n + 1), "uniform", self.step)


def _outward(l, w, setup):
    pts = setup.outward_grid.points
    nseed = max(2, int(np.searchsorted(pts, ORIGIN_SEED, side="right")))
    u, _ = numerov(zero_energy_g(l, w, pts), _seeds(l, w, pts[:nseed], 1.0), setup.step)
    return pts, u


def _inward(l, w, setup):
    pts = setup.inward_grid.points
    rev = pts[::-1]
    nseed = max(2, int(np.count_nonzero(rev >= TAIL_SEED)))
    t = 1.0 / rev[:nseed]
    u, _ = numerov(zero_energy_g(l, w, rev), _seeds(l, w, t, t), setup.step)
    return pts, u[::-1]


def _seeds(l, w, x, divisor):
    if np.ndim(w) == 0:
        return series_solution(l, _mf_coupling_coeffs(float(w)), x) / divisor
    return np.column_stack([series_solution(l, _mf_coupling_coeffs(wi), x) / divisor for wi in w])


def _value_and_slope(u, i, h):
    return u[i], sum(c * u[i + k] for c, k in zip(_D1_5PT, range(-2, 3))) / h


def _match(l, w, setup):
    h = setup.step
    po, uo = _outward(l, w, setup)
    pi, ui = _inward(l, w, setup)
    io = po.size - 3
    ii = 2
    vo, so = _value_and_slope(uo, io, h)
    vi, si = _value_and_slope(ui, ii, h)
    norm = np.sqrt((vo * vo + so * so) * (vi * vi + si * si))
    D = (vo * si - so * vi) / norm
    return np.atleast_1d(D), (po, uo, pi, ui, vo, so, vi, si)


def match_mismatch(l, w, setup: ShootingSetup | None = None):
    """Normalized Wronskian mismatch D(w) at rho = 1 (vectorized over ``w``)."""
    setup = setup or ShootingSetup()
    D, _ = _match(l, w, setup)
    return D if np.ndim(w) else float(D[0])


def _stitch(l, w, setup):
    _, (po, uo, pi, ui, vo, so, vi, si) = _match(l, w, setup)
    vo, so, vi, si = float(vo), float(so), float(vi), float(si)
    # scale the inward branch with whichever matching datum is better conditioned
    if abs(vi) > 0.1 * math.hypot(vi, si):
        scale = vo / vi
    else:
        scale = so / si
    io = po.size - 3
    pts = np.concatenate([po[: io + 1], pi[3:]])
    vals = np.concatenate([uo[: io + 1], scale * ui[3:]])
    return pts, vals


def _nodes(l, w, setup):
    pts, vals = _stitch(l, w, setup)
    return count_nodes(pts, vals, exclude_below=2 * setup.step), pts, vals


@dataclass
class ShootingResult:
    """Outcome of :func:`solve_coupling` with ``full_output=True``."""

    w: float
    l: int
    n_r: int
    nodes: int
    mismatch: float
    bracket: tuple
    discretization_error: float
    roots_found: list
    solution: RadialSolution


def _roots(l, lo, hi, setup, tol, scan_step):
    ws = np.arange(lo, hi + scan_step, scan_step)
    D = match_mismatch(l, ws, setup)
    roots = []
    for a, b, da, db in zip(ws[:-1], ws[1:], D[:-1], D[1:]):
        if da == 0.0:
            roots.append((float(a), (float(a), float(a))))
        elif da * db < 0:
            r = brentq(lambda x: match_mismatch(l, x, setup), a, b, xtol=0.1 * tol, rtol=4 * np.finfo(float).eps)
            roots.append((r, (float(a), float(b))))
    return roots, ws, D


def solve_coupling(
    l, n_r, tol=1e-8, step=1e-3, richardson=True, full_output=False, scan_step=0.5, bracket=None
):
    """Coupling w at which a regular, decaying zero-energy state with n_r nodes exists.

    Parameters
    ----------
    l, n_r : int
        Angular and radial quantum numbers.
    tol : float
        Root-finding tolerance on w.
    step : float
        Numerov step (must be 1/N).
    richardson : bool
        Repeat at half the step and extrapolate the O(h^4) error away.
    full_output : bool
        Also return a :class:`ShootingResult`.
    scan_step : float
        Spacing of the bracketing scan in w.
    bracket : (float, float), optional
        Search window for w; defaults to [1, 4(n_r + l + 2)^2].

    Returns
    -------
    w : float
    result : ShootingResult
        Only when ``full_output`` is true.

    Raises
    ------
    SearchError
        No sign change of the mismatch inside the bracket.
    WrongBranchError
        Roots exist, but none has n_r nodes.
    """
    if int(l) != l or l < 0 or int(n_r) != n_r or n_r < 0:
        raise DomainError("l and n_r must be nonnegative integers")
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    lo, hi = bracket if bracket is not None else (1.0, 4.0 * (n_r + l + 2) ** 2)
    setup = ShootingSetup(step)
    w, nodes, roots, bracket, pts, vals = _solve_on(l, n_r, lo, hi, setup, tol, scan_step)
    disc = float("nan")
    if richardson:
        fine = ShootingSetup(step / 2)
        a, b = bracket
        w2 = brentq(lambda x: match_mismatch(l, x, fine), a - 0.5 * scan_step, b + 0.5 * scan_step, xtol=0.1 * tol, rtol=4 * np.finfo(float).eps)
        disc = (w2 - w) / 15.0
        w = w2 + disc
        disc = abs(disc)
        nodes, pts, vals = _nodes(l, w2, fine)
    if not full_output:
        return w
    grid = RadialGrid(pts, "uniform", step / 2 if richardson else step)
    sol = RadialSolution(
        grid=grid,
        values=vals,
        l=l,
        parameter=("w", w),
        boundary_report={
            "origin_exponent": loglog_slope(pts[:10], vals[:10]),
            "tail_exponent_or_phase": loglog_slope(pts[pts >= 0.5 * pts[-1]], vals[pts >= 0.5 * pts[-1]]),
        },
        direction="matched",
    )
    result = ShootingResult(
        w=w,
        l=l,
        n_r=n_r,
        nodes=nodes,
        mismatch=match_mismatch(l, w, setup),
        bracket=bracket,
        discretization_error=disc,
        roots_found=[r for r, _ in roots],
        solution=sol,
    )
    return w, result


def _solve_on(l, n_r, lo, hi, setup, tol, scan_step):
    roots, ws, D = _roots(l, lo, hi, setup, tol, scan_step)
    if not roots:
        raise SearchError(
            f"no sign change of the matching function for l={l} in w in [{lo}, {hi}]",
            {"scan_w": ws.tolist(), "scan_mismatch": D.tolist()},
        )
    found = []
    for w, bracket in roots:
        nodes, pts, vals = _nodes(l, w, setup)
        found.append((w, nodes))
        if nodes == n_r:
            return w, nodes, roots, bracket, pts, vals
    raise WrongBranchError(
        f"no root with {n_r} nodes for l={l}; refine the bracket",
        {"roots": found},
    )
