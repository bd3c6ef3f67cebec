"""
Rational valleys of shadows: zeros of the limit profile S_{a/q} at times 2 pi a/q.

The proven part consists of the arcs [0, 2 pi/q) at every time with 4 | q.
Elsewhere only numerical evidence is produced: grid points where |S| falls
far below its typical size on the slice are reported as candidates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DomainError
from .evolution import RationalTime, _time_pair, limit_profile

__all__ = ["ValleySlice", "ValleyZero", "v0_slices", "slice_grid", "scan_zeros", "shadow_mask"]

PROVEN = "PROVEN"
CANDIDATE = "CANDIDATE"


@dataclass(frozen=True)
class ValleySlice:
    """theta in [0, 2 pi/q) at t = 2 pi a/q, for 4 | q."""

    rt: RationalTime

    def __post_init__(self):
        if self.rt.q % 4:
            raise ContractViolation(f"valley slices need 4 | q, got q={self.rt.q}")

    @property
    def interval(self) -> tuple[float, float]:
        return 0.0, 2.0 * math.pi / self.rt.q

    def contains(self, theta) -> np.ndarray:
        return np.asarray(theta) < self.interval[1]

    def as_dict(self) -> dict:
        return {"a": self.rt.a, "q": self.rt.q, "t": self.rt.t, "theta_max": self.interval[1]}


@dataclass(frozen=True)
class ValleyZero:
    theta: float
    label: str

    def as_dict(self) -> dict:
        return {"theta": self.theta, "label": self.label}


def v0_slices(q_max: int) -> list[ValleySlice]:
    """All proven valley slices with 4 | q <= q_max, ordered by time."""
    if q_max < 4:
        raise DomainError("q_max must be at least 4")
    out = [
        ValleySlice(RationalTime(a, q))
        for q in range(4, q_max + 1, 4)
        for a in range(1, q // 2, 2)
        if math.gcd(a, q) == 1
    ]
    return sorted(out, key=lambda s: s.rt.fraction)


def slice_grid(n_grid: int) -> np.ndarray:
    """Cell-centred angles (i + 1/2) pi / n_grid."""
    return (np.arange(n_grid) + 0.5) * (math.pi / n_grid)


def scan_zeros(rt, n_grid: int = 1024, rel_tol: float = 1e-4) -> list[ValleyZero]:
    """Grid points where |S_{a/q}| < rel_tol * median |S_{a/q}| over the slice.

    Points inside the proven arc [0, 2 pi/q) (when 4 | q) are labelled
    PROVEN, all others CANDIDATE.  The median is used as the reference scale
    because the maximum depends on how close the grid comes to a blow-up.
    """
    if n_grid < 256:
        raise DomainError("n_grid must be at least 256")
    a, q = _time_pair(rt)
    theta = slice_grid(n_grid)
    mag = np.abs(limit_profile(theta, (a, q)))
    scale = np.median(mag)
    hits = np.flatnonzero(mag < rel_tol * scale)
    proven_edge = 2.0 * math.pi / q if q % 4 == 0 else 0.0
    return [
        ValleyZero(float(theta[i]), PROVEN if theta[i] < proven_edge else CANDIDATE)
        for i in hits
    ]


def shadow_mask(grid, fraction: float) -> np.ndarray:
    """Boolean mask of cells whose value is below ``fraction`` of the grid maximum."""
    values = np.asarray(getattr(grid, "values", grid), dtype=float)
    if values.size == 0:
        raise DomainError("shadow_mask needs a non-empty grid")
    if not 0.0 < fraction <= 1.0:
        raise DomainError("fraction must lie in (0, 1]")
    return values < fraction * values.max()
