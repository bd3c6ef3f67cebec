"""
Legendre polynomials and their generating function

    F(z, theta) = sum_l z^l P_l(cos theta) = ((z - cos theta)^2 + sin^2 theta)^(-1/2)

with the square root taken on arguments in (-pi, pi].  On the unit circle
z = e(n/q) the radicand factors as 2 z (cos(2 pi n/q) - cos theta) and F has
the explicit polar form R e^{iA} implemented by :func:`polar_form`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "BranchConvention",
    "BRANCH",
    "PolarForm",
    "legendre_eval",
    "legendre_table",
    "generating_function",
    "generating_series",
    "normalization_constant",
    "cos_gap",
    "polar_form",
    "polar_terms",
    "series_length",
]

# |radicand| at or below this is reported as a pole.
POLE_TOL = 1e-14
# |theta - 2 pi |n|/q| at or below this is treated as the singular angle itself.
ANGLE_TOL = 1e-12
_UNIT_TOL = 1e-13


class BranchConvention:
    """Principal square root with arguments in (-pi, pi].

    ``numpy.sqrt`` already uses this branch except on the negative real axis
    with a negative-zero imaginary part, which it sends to -i sqrt|w|.
    Adding +0.0 to the imaginary part removes the signed zero.
    """

    @staticmethod
    def sqrt(w):
        w = np.asarray(w, dtype=complex)
        w = w.real + 1j * (w.imag + 0.0)
        out = np.sqrt(w)
        return complex(out) if out.ndim == 0 else out


BRANCH = BranchConvention()


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def legendre_eval(l: int, x):
    """P_l(x) by the upward three-term recurrence."""
    if l < 0:
        raise DomainError(f"degree must be nonnegative, got {l}")
    x, scalar = _as_array(x)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("legendre_eval requires |x| <= 1")
    p_prev = np.ones_like(x)
    if l == 0:
        return float(p_prev) if scalar else p_prev
    p = x.copy()
    for k in range(1, l):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return float(p) if scalar else p


def legendre_table(L: int, x) -> np.ndarray:
    """Array of shape (L, len(x)) holding P_0(x), ..., P_{L-1}(x)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > 1.0):
        raise DomainError("legendre_table requires |x| <= 1")
    out = np.empty((L, x.size))
    if L > 0:
        out[0] = 1.0
    if L > 1:
        out[1] = x
    for k in range(1, L - 1):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def cos_gap(alpha, theta):
    """cos(alpha) - cos(theta), written as a product of sines to stay accurate near alpha = theta."""
    return 2.0 * np.sin((theta + alpha) / 2.0) * np.sin((theta - alpha) / 2.0)


def _check_theta(theta):
    if np.any(theta < 0.0) or np.any(theta > math.pi):
        raise DomainError("theta must lie in [0, pi]")


def generating_function(z, theta):
    """Closed form of F(z, theta) for |z| <= 1.

    On the unit circle the radicand is assembled as 2 z (cos|arg z| - cos theta)
    to avoid cancellation near the poles z = e^{+-i theta}.

    Raises:
        DomainError: |z| > 1 or theta outside [0, pi].
        PoleError: (z, theta) is a singular pair.
    """
    z = np.asarray(z, dtype=complex)
    theta, scalar_t = _as_array(theta)
    scalar = z.ndim == 0 and scalar_t
    _check_theta(theta)
    mod = np.abs(z)
    if np.any(mod > 1.0 + _UNIT_TOL):
        raise DomainError("generating_function requires |z| <= 1")
    z, theta = np.broadcast_arrays(z, theta)
    on_circle = np.abs(mod - 1.0) <= _UNIT_TOL
    on_circle = np.broadcast_to(on_circle, z.shape)
    c = np.cos(theta)
    radicand = (z - c) ** 2 + np.sin(theta) ** 2
    if np.any(on_circle):
        zu = z[on_circle] / np.abs(z[on_circle])
        alpha = np.abs(np.angle(zu))
        radicand = np.array(radicand, dtype=complex)
        radicand[on_circle] = 2.0 * zu * cos_gap(alpha, theta[on_circle])
    if np.any(np.abs(radicand) <= POLE_TOL):
        raise PoleError("F(z, theta) evaluated at a singular pair z = e^{+-i theta}")
    out = 1.0 / BRANCH.sqrt(radicand)
    return complex(out) if scalar else out


def generating_series(z, theta, L: int):
    """Partial sum sum_{l<L} z^l P_l(cos theta); requires |z| < 1.

    The tail is bounded by |z|^L / (1 - |z|).
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("generating_series requires |z| < 1")
    if L < 1:
        raise DomainError("L must be positive")
    theta, scalar = _as_array(theta)
    _check_theta(theta)
    x = np.cos(theta)
    acc = np.zeros(x.shape, dtype=complex)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    zl = 1.0 + 0j
    for l in range(L):
        acc += zl * p
        p_prev, p = p, ((2 * l + 1) * x * p - l * p_prev) / (l + 1)
        zl *= z
    return complex(acc) if scalar else acc


def series_length(r: float, tol: float = 1e-12, minimum: int = 64) -> int:
    """Smallest L (at least ``minimum``) with r^L <= tol * (1 - r)."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    return max(minimum, math.ceil(math.log(tol * (1.0 - r)) / math.log(r)))


def normalization_constant(r: float) -> float:
    """c_r making c_r F(r, .) a unit vector in L^2 of the sphere."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    return (2.0 * math.pi / r * math.log1p(2.0 * r / (1.0 - r))) ** -0.5


@dataclass(frozen=True)
class PolarForm:
    magnitude: float
    phase: float

    @property
    def value(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))


def _check_index(n: int, q: int):
    if q < 1:
        raise DomainError(f"q must be positive, got {q}")
    if not (-q < 2 * n <= q):
        raise DomainError(f"n={n} outside (-q/2, q/2] for q={q}")


def polar_terms(n: int, q: int, theta):
    """Vectorized (R, A) of F(e(n/q), theta); raises PoleError at theta = 2 pi |n| / q."""
    _check_index(n, q)
    theta = np.asarray(theta, dtype=float)
    _check_theta(theta)
    alpha = 2.0 * math.pi * abs(n) / q
    if np.any(np.abs(theta - alpha) <= ANGLE_TOL):
        raise PoleError(f"F(e({n}/{q}), theta) is singular at theta = {alpha!r}")
    R = (2.0 * np.abs(cos_gap(alpha, theta))) ** -0.5
    shift = math.pi * n / q
    A = np.where(theta > alpha, -shift, math.copysign(math.pi / 2, n) - shift)
    return R, A


def polar_form(n: int, q: int, theta: float) -> PolarForm:
    """Magnitude R and phase A of F(e(n/q), theta) for -q/2 < n <= q/2.

    R = 2^{-1/2} |cos(2 pi n/q) - cos theta|^{-1/2}; A = -pi n/q to the right
    of the singular angle 2 pi |n|/q and sgn(n) pi/2 - pi n/q to its left.
    """
    R, A = polar_terms(n, q, float(theta))
    return PolarForm(float(R), float(A))
