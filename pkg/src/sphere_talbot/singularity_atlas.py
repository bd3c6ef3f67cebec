"""Where the limit profile S_{a/q} blows up, and where the initial peak reappears."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .evolution import _time_pair, psi_rational
from .gauss_sums import gauss_sum, gauss_vanishes

__all__ = [
    "SingularityKind",
    "SingularityReport",
    "BlowupCheck",
    "singular_points",
    "blowup_indices",
    "talbot_predicate",
    "verify_blowup_numerically",
    "DEFAULT_OFFSETS",
    "DEFAULT_RS",
]

DEFAULT_OFFSETS = (0.05, 0.02, 0.01)
DEFAULT_RS = (0.9, 0.95, 0.97)


class SingularityKind(str, enum.Enum):
    RIGHT_BLOWUP_LEFT_FINITE = "RIGHT_BLOWUP_LEFT_FINITE"
    REMOVABLE = "REMOVABLE"


@dataclass(frozen=True)
class SingularityReport:
    k: int
    theta: float
    kind: SingularityKind
    gauss_value: complex

    @property
    def blows_up(self) -> bool:
        return self.kind is SingularityKind.RIGHT_BLOWUP_LEFT_FINITE

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "theta": self.theta,
            "kind": self.kind.value,
            "gauss_re": self.gauss_value.real,
            "gauss_im": self.gauss_value.imag,
        }


def singular_points(rt) -> list[SingularityReport]:
    """Classify every candidate angle 2 pi k/q, 0 <= k <= q/2.

    The kind follows from G(a, a+k; q) != 0, decided by integer arithmetic.
    """
    a, q = _time_pair(rt)
    out = []
    for k in range(q // 2 + 1):
        kind = (
            SingularityKind.REMOVABLE
            if gauss_vanishes(a, a + k, q)
            else SingularityKind.RIGHT_BLOWUP_LEFT_FINITE
        )
        out.append(SingularityReport(k, 2.0 * math.pi * k / q, kind, gauss_sum(a, a + k, q)))
    return out


def blowup_indices(rt) -> list[int]:
    return [rep.k for rep in singular_points(rt) if rep.blows_up]


def talbot_predicate(rt, k: int) -> bool:
    """Does the initial peak reappear at theta = 2 pi k/q at time 2 pi a/q?"""
    a, q = _time_pair(rt)
    if not 0 <= 2 * k <= q:
        raise ContractViolation(f"k={k} outside [0, q/2] for q={q}")
    return (2 * (a + k + 1) + q) % 4 != 0


@dataclass
class BlowupCheck:
    """Densities |Psi|^2 sin(theta) around one blow-up angle.

    ``right[i, j]`` is at theta_k + offsets[j] for rs[i]; ``left`` likewise at
    theta_k - offsets[j] (NaN when theta_k = 0).
    """

    k: int
    theta: float
    rs: tuple
    offsets: tuple
    right: np.ndarray
    left: np.ndarray
    increasing: bool
    left_bounded: bool

    @property
    def ok(self) -> bool:
        return self.increasing and self.left_bounded


def verify_blowup_numerically(
    rt,
    k: int,
    offsets=DEFAULT_OFFSETS,
    rs=DEFAULT_RS,
    left_factor: float = 4.0,
) -> BlowupCheck:
    """Check that the density grows with r just right of a predicted blow-up.

    ``increasing`` requires a strict increase along ascending r at the
    smallest offset.  ``left_bounded`` requires every left-side value to stay
    below ``left_factor`` times the largest density sampled (either side) at
    the smallest r.
    """
    a, q = _time_pair(rt)
    if not talbot_predicate((a, q), k):
        raise ContractViolation(f"k={k} is not a blow-up index for {a}/{q}")
    theta_k = 2.0 * math.pi * k / q
    rs = tuple(sorted(rs))
    offsets = tuple(offsets)
    off = np.asarray(offsets, dtype=float)

    def density(th, r):
        psi = psi_rational(th, (a, q), r)
        return np.abs(psi) ** 2 * np.sin(th)

    right = np.array([density(np.clip(theta_k + off, 0.0, math.pi), r) for r in rs])
    if k > 0:
        left = np.array([density(theta_k - off, r) for r in rs])
        ref = max(left[0].max(), right[0].max())
        left_bounded = bool(np.all(left <= left_factor * ref))
    else:
        left = np.full_like(right, np.nan)
        left_bounded = True
    j = int(np.argmin(off))
    increasing = bool(np.all(np.diff(right[:, j]) > 0))
    return BlowupCheck(k, theta_k, rs, offsets, right, left, increasing, left_bounded)
