"""Radial sample grids in the scaled variable rho = r / R."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

UNIFORM = "uniform"
LOGARITHMIC = "logarithmic"


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing, strictly positive sample points.

    Use :meth:`uniform` or :meth:`logarithmic` rather than the constructor
    unless the points come from elsewhere.
    """

    points: np.ndarray
    spacing: str = UNIFORM
    step: float | None = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise DomainError("a radial grid needs at least two points")
        if not np.all(np.isfinite(pts)) or pts[0] <= 0.0:
            raise DomainError("radial grid points must be finite and positive")
        if np.any(np.diff(pts) <= 0.0):
            raise DomainError("radial grid points must be strictly increasing")
        if self.spacing not in (UNIFORM, LOGARITHMIC):
            raise DomainError(f"unknown grid spacing {self.spacing!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.spacing == UNIFORM and self.step is None:
            object.__setattr__(self, "step", float(pts[1] - pts[0]))

    @classmethod
    def uniform(cls, start: float, stop: float, num: int) -> "RadialGrid":
        if not 0 < start < stop or num < 2:
            raise DomainError(f"bad uniform grid ({start}, {stop}, {num})")
        step = (stop - start) / (num - 1)
        pts = start + step * np.arange(num)
        return cls(pts, UNIFORM, step)

    @classmethod
    def from_step(cls, start: float, step: float, num: int) -> "RadialGrid":
        """Uniform grid ``start + i * step``; exact multiples when start == step."""
        if start <= 0 or step <= 0 or num < 2:
            raise DomainError(f"bad uniform grid ({start}, {step}, {num})")
        return cls(start + step * np.arange(num), UNIFORM, float(step))

    @classmethod
    def logarithmic(cls, start: float, stop: float, num: int) -> "RadialGrid":
        if not 0 < start < stop or num < 2:
            raise DomainError(f"bad logarithmic grid ({start}, {stop}, {num})")
        return cls(np.geomspace(start, stop, num), LOGARITHMIC, None)

    @property
    def is_uniform(self) -> bool:
        return self.spacing == UNIFORM

    def __len__(self):
        return self.points.size

    @property
    def start(self) -> float:
        return float(self.points[0])

    @property
    def stop(self) -> float:
        return float(self.points[-1])
