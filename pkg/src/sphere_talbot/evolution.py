"""
Polar solutions of i Psi_t = -Laplacian Psi on the unit sphere started from
the wave packet c_r F(r, theta).

Three evaluators:

* :func:`psi_series` -- truncated Legendre series, any time t;
* :func:`psi_rational` -- finite Gauss-sum combination at t = 2 pi a / q;
* :func:`limit_profile` -- the r -> 1 profile S_{a/q}(theta) without c_r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ContractViolation, DomainError, PoleError
from .gauss_sums import e_frac, gauss_sum_row, gauss_vanishes
from .legendre_kernel import (
    ANGLE_TOL,
    generating_function,
    normalization_constant,
    polar_terms,
    series_length,
)

__all__ = [
    "RationalTime",
    "WavePacketParams",
    "psi_series",
    "psi_rational",
    "dft_coefficient_identity_check",
    "limit_profile",
    "summand_magnitude",
    "revival_weights",
]

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RationalTime:
    """t = 2 pi a / q with a/q reduced into [0, 1/2) using the pi-periodicity in t."""

    a: int
    q: int = 1

    def __post_init__(self):
        if self.q == 0:
            raise DomainError("q must be nonzero")
        frac = Fraction(self.a, self.q) % _HALF
        object.__setattr__(self, "a", frac.numerator)
        object.__setattr__(self, "q", frac.denominator)

    @classmethod
    def parse(cls, text: str) -> "RationalTime":
        """Parse ``"a/q"`` or an integer as t / (2 pi)."""
        frac = Fraction(text.strip())
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def t(self) -> float:
        return 2.0 * math.pi * self.a / self.q

    def __str__(self):
        return f"{self.a}/{self.q}"


def _time_pair(rt) -> tuple[int, int]:
    """(a, q) from a RationalTime, or from a raw coprime pair used verbatim."""
    if isinstance(rt, RationalTime):
        return rt.a, rt.q
    a, q = (int(v) for v in rt)
    if q < 1 or math.gcd(a, q) != 1:
        raise ContractViolation(f"({a}, {q}) is not a reduced fraction")
    return a, q


@dataclass(frozen=True)
class WavePacketParams:
    """Concentration r in (0, 1) and truncation L (auto-selected when omitted)."""

    r: float
    L: int | None = field(default=None)

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"r must lie in (0, 1), got {self.r}")
        if self.L is None:
            object.__setattr__(self, "L", series_length(self.r))
        elif self.L < 1:
            raise DomainError("L must be positive")

    @property
    def c_r(self) -> float:
        return normalization_constant(self.r)


def _as_params(params) -> WavePacketParams:
    return params if isinstance(params, WavePacketParams) else WavePacketParams(float(params))


def _theta_array(theta):
    arr = np.asarray(theta, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > math.pi):
        raise DomainError("theta must lie in [0, pi]")
    return arr, arr.ndim == 0


def _series_phases(L: int, t) -> np.ndarray:
    """exp(-i l(l+1) t) for l < L; exact integer reduction for rational times."""
    l = np.arange(L, dtype=np.int64)
    if isinstance(t, (RationalTime, Fraction)):
        frac = t.fraction if isinstance(t, RationalTime) else t
        return e_frac(-(l * (l + 1) % frac.denominator) * frac.numerator, frac.denominator)
    ang = np.fmod(l * (l + 1) * float(t), 2.0 * math.pi)
    return np.exp(-1j * ang)


def psi_series(theta, t, params):
    """c_r sum_{l<L} r^l P_l(cos theta) e^{-i l(l+1) t}.

    ``t`` is a float in radians, a :class:`RationalTime`, or a Fraction
    giving t / (2 pi); the latter two use exact phase reduction.
    ``params`` is a :class:`WavePacketParams` or a bare r.
    """
    params = _as_params(params)
    theta, scalar = _theta_array(theta)
    x = np.cos(theta)
    coef = params.r ** np.arange(params.L) * _series_phases(params.L, t)
    acc = np.zeros(x.shape, dtype=complex)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for l in range(params.L):
        acc += coef[l] * p
        p_prev, p = p, ((2 * l + 1) * x * p - l * p_prev) / (l + 1)
    acc *= params.c_r
    return complex(acc) if scalar else acc


def revival_weights(rt) -> tuple[np.ndarray, np.ndarray]:
    """Indices n in (-q/2, q/2] and weights G(-a, -a-n; q), exact zeros where G vanishes."""
    a, q = _time_pair(rt)
    n = np.arange(-((q - 1) // 2), q // 2 + 1, dtype=np.int64)
    g = gauss_sum_row(-a, q, -a - n)
    dead = np.array([gauss_vanishes(-a, int(-a - k), q) for k in n])
    g[dead] = 0.0
    return n, g


def psi_rational(theta, rt, r: float):
    """Psi(theta, 2 pi a/q) as (c_r / q) sum_n G(-a, -a-n; q) F(r e(n/q), theta).

    ``rt`` is a :class:`RationalTime` or a raw coprime pair (a, q), which is
    used as given without reduction.
    """
    c_r = normalization_constant(r)
    _, q = _time_pair(rt)
    theta, scalar = _theta_array(theta)
    n, g = revival_weights(rt)
    acc = np.zeros(theta.shape, dtype=complex)
    for k, gk in zip(n, g):
        if gk != 0:
            acc += gk * generating_function(r * e_frac(k, q), theta)
    acc *= c_r / q
    return complex(acc) if scalar else acc


def dft_coefficient_identity_check(rt, l: int) -> float:
    """|e(-l(l+1)a/q) - (1/q) sum_{n<q} G(-a, -a-n; q) e(l n/q)|."""
    a, q = _time_pair(rt)
    if l < 0:
        raise DomainError("l must be nonnegative")
    n = np.arange(q, dtype=np.int64)
    g = gauss_sum_row(-a, q, -a - n)
    rhs = np.sum(g * e_frac(l * n, q)) / q
    lhs = e_frac(-(l * (l + 1) % q) * a, q)
    return float(abs(lhs - rhs))


def limit_profile(theta, rt, *, regularize: bool = True, side: str | None = None):
    """S_{a/q}(theta) = sum_n G(-a, -a-n; q) F(e(n/q), theta).

    Terms are evaluated through their polar form.  With ``regularize`` each
    pair n = +-k with nonvanishing Gauss sum is set to exactly zero left of
    its singular angle 2 pi k/q, where the two terms cancel identically.

    At theta = 2 pi k/q: removable points return the finite value; blow-up
    points raise :class:`PoleError` unless ``side="left"`` is requested, in
    which case the left limit is returned.
    """
    a, q = _time_pair(rt)
    theta, scalar = _theta_array(theta)
    theta = np.atleast_1d(theta)
    n, g = revival_weights(rt)
    acc = np.zeros(theta.shape, dtype=complex)
    for k, gk in zip(n, g):
        if gk == 0:
            continue
        alpha = 2.0 * math.pi * abs(int(k)) / q
        at_pole = np.abs(theta - alpha) <= ANGLE_TOL
        paired = 0 < 2 * abs(int(k)) < q
        if np.any(at_pole):
            if side != "left" or not paired or alpha == 0.0:
                raise PoleError(f"S_{{{a}/{q}}} blows up to the right of theta = {alpha!r}")
        live = ~at_pole
        if regularize and paired:
            live &= theta > alpha
        if not np.any(live):
            continue
        R, A = polar_terms(int(k), q, theta[live])
        acc[live] += gk * R * np.exp(1j * A)
    return complex(acc[0]) if scalar else acc


def summand_magnitude(n: int, rt, r: float, theta: float) -> float:
    """|c_r G(-a, -a-n; q) F(r e(n/q), theta)| from the real trigonometric expression.

    With X = (r^2-1)^2/r + 4r(cos^2 theta + cos^2 phi) - 4(r^2+1) cos theta cos phi,
    phi = 2 pi n/q, one has |(z - cos theta)^2 + sin^2 theta|^2 = r X for
    z = r e(n/q), hence the magnitude |G| (2 pi log((1+r)/(1-r)) / r)^{-1/2} (r X)^{-1/4}.
    """
    a, q = _time_pair(rt)
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    g = 0.0 if gauss_vanishes(-a, -a - n, q) else abs(gauss_sum_row(-a, q, [-a - n])[0])
    phi = 2.0 * math.pi * n / q
    # r X = |z - e^{i theta}|^2 |z - e^{-i theta}|^2, each factor a sum of squares,
    # which avoids the cancellation in the expanded quartic as r -> 1
    d = (1.0 - r) ** 2
    rX = (d + 4.0 * r * math.sin((phi - theta) / 2) ** 2) * (d + 4.0 * r * math.sin((phi + theta) / 2) ** 2)
    if rX == 0.0:
        raise PoleError("summand evaluated at a pole")
    log_term = math.log1p(2.0 * r / (1.0 - r))
    return g * (2.0 * math.pi * log_term / r) ** -0.5 * rX ** -0.25
