"""
Grid evaluation of quantum and optical Talbot carpets and of single time slices.

The quantum carpet samples sqrt(|Psi(theta, t)|^2 sin theta) on cell centres
of [0, pi] x [0, pi].  Cell-centred times satisfy t / (2 pi) = (2j+1)/(4 n_t),
so the phases e^{-i l(l+1) t} are reduced exactly in integer arithmetic and the
whole carpet reduces to two real matrix products per column block.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceBudgetError
from .evolution import RationalTime, WavePacketParams, psi_rational, psi_series
from .legendre_kernel import legendre_table, normalization_constant

__all__ = [
    "CarpetGrid",
    "quantum_carpet",
    "slice_profile",
    "optical_carpet",
    "optical_intensity",
    "paraxial_field",
    "cell_centres",
    "local_maxima",
    "WORK_BUDGET",
]

# Upper bound on n_theta * n_t * L for quantum_carpet.
WORK_BUDGET = 4e9
_COLUMN_BLOCK = 128


@dataclass
class CarpetGrid:
    """Scalar density sampled on x_axis (columns) by y_axis (rows).

    ``values[i, j]`` belongs to (y_axis[i], x_axis[j]).
    """

    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_axis = np.asarray(self.x_axis, dtype=float)
        self.y_axis = np.asarray(self.y_axis, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.y_axis.size, self.x_axis.size):
            raise DomainError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.y_axis.size}, {self.x_axis.size})"
            )
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise DomainError("carpet values must be finite and nonnegative")

    @property
    def kind(self) -> str:
        return self.meta.get("kind", "unknown")

    def column(self, x: float) -> tuple[int, np.ndarray]:
        """Index and values of the column nearest to x."""
        j = int(np.argmin(np.abs(self.x_axis - x)))
        return j, self.values[:, j]

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.meta.get("params", {}),
            "min": float(self.values.min()) if self.values.size else None,
            "max": float(self.values.max()) if self.values.size else None,
            "axes": {
                "x": _axis_info(self.x_axis, self.meta.get("x_name", "x")),
                "y": _axis_info(self.y_axis, self.meta.get("y_name", "y")),
            },
        }


def _axis_info(axis, name):
    return {
        "name": name,
        "n": int(axis.size),
        "min": float(axis[0]) if axis.size else None,
        "max": float(axis[-1]) if axis.size else None,
    }


def cell_centres(n: int, lo: float = 0.0, hi: float = math.pi) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * ((hi - lo) / n)


def quantum_carpet(
    r: float,
    L: int = 1000,
    n_theta: int = 1024,
    n_t: int = 1024,
    threads: int | None = None,
    budget: float = WORK_BUDGET,
) -> CarpetGrid:
    """sqrt(|Psi|^2 sin theta) from the truncated series on an n_theta x n_t grid."""
    if n_theta < 1 or n_t < 1 or L < 1:
        raise DomainError("grid sizes and L must be positive")
    work = float(n_theta) * n_t * L
    if work > budget:
        raise ResourceBudgetError(f"n_theta*n_t*L = {work:.3g} exceeds budget {budget:.3g}")
    params = WavePacketParams(r, L)
    theta = cell_centres(n_theta)
    t = cell_centres(n_t)

    weighted = legendre_table(L, np.cos(theta)) * (r ** np.arange(L))[:, None]
    weighted = np.ascontiguousarray(weighted.T)  # (n_theta, L)

    l = np.arange(L, dtype=np.int64)
    ll = l * (l + 1)
    den = 4 * n_t

    def block(j0):
        j = np.arange(j0, min(j0 + _COLUMN_BLOCK, n_t), dtype=np.int64)
        # t_j / (2 pi) = (2j+1) / (4 n_t)
        k = (ll[:, None] % den) * (2 * j + 1)[None, :] % den
        ang = 2.0 * math.pi * (k / den)
        re = weighted @ np.cos(ang)
        im = weighted @ np.sin(ang)
        return j0, re * re + im * im

    values = np.empty((n_theta, n_t))
    starts = range(0, n_t, _COLUMN_BLOCK)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(block, starts))
    else:
        results = [block(j0) for j0 in starts]
    for j0, mod2 in results:
        values[:, j0:j0 + mod2.shape[1]] = mod2
    values *= params.c_r ** 2 * np.sin(theta)[:, None]
    np.sqrt(values, out=values)
    return CarpetGrid(
        t,
        theta,
        values,
        {
            "kind": "quantum",
            "params": {"r": r, "L": L, "n_theta": n_theta, "n_t": n_t},
            "x_name": "t",
            "y_name": "theta",
        },
    )


def slice_profile(time, r: float, n_theta: int = 1024, L: int | None = None) -> dict:
    """Columns theta, re, im, density = |Psi|^2 sin theta along one time slice.

    A :class:`RationalTime` (or raw (a, q) pair) goes through the exact
    Gauss-sum formula; a float time in radians uses the series with
    truncation ``L``.
    """
    theta = cell_centres(n_theta)
    if isinstance(time, (RationalTime, tuple)):
        psi = psi_rational(theta, time, r)
    else:
        psi = psi_series(theta, float(time), WavePacketParams(r, L))
    return {
        "theta": theta,
        "re": psi.real,
        "im": psi.imag,
        "density": np.abs(psi) ** 2 * np.sin(theta),
    }


def optical_intensity(x, y, inv_lambda: int, w: float):
    """|sum_{|n| <= 1/lambda} sin(n pi w)/(n pi) e(x sqrt(lambda^-2 - n^2) + n y)|^2."""
    if inv_lambda < 1:
        raise DomainError("inv_lambda must be at least 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = np.arange(-inv_lambda, inv_lambda + 1)
    amp = w * np.sinc(n * w)
    kx = np.sqrt(float(inv_lambda) ** 2 - n.astype(float) ** 2)
    xs, ys = np.broadcast_arrays(x, y)
    field_ = np.zeros(xs.shape, dtype=complex)
    for nk, ak, kk in zip(n, amp, kx):
        if ak == 0.0:
            continue
        phase = np.mod(xs * kk, 1.0) + np.mod(nk * ys, 1.0)
        field_ += ak * np.exp(2j * np.pi * phase)
    return np.abs(field_) ** 2


def optical_carpet(
    inv_lambda: int = 100,
    w: float = 0.1,
    n_x: int = 300,
    n_y: int = 300,
    x_range=None,
    y_range=(0.0, 1.0),
    quantity: str = "intensity",
) -> CarpetGrid:
    """Diffraction intensity behind a unit-period grating of slit width w.

    ``x_range`` defaults to one Talbot length [0, 2/lambda]; both axes include
    their endpoints.  ``quantity="amplitude"`` stores |u| instead of |u|^2.
    """
    if quantity not in ("intensity", "amplitude"):
        raise DomainError(f"unknown quantity {quantity!r}")
    if x_range is None:
        x_range = (0.0, 2.0 * inv_lambda)
    if not 0.0 < w <= 1.0:
        raise DomainError("w must lie in (0, 1]")
    x = np.linspace(x_range[0], x_range[1], n_x)
    y = np.linspace(y_range[0], y_range[1], n_y)
    values = optical_intensity(x[None, :], y[:, None], inv_lambda, w)
    if quantity == "amplitude":
        values = np.sqrt(values)
    return CarpetGrid(
        x,
        y,
        values,
        {
            "kind": "optical",
            "params": {
                "inv_lambda": inv_lambda,
                "w": w,
                "n_x": n_x,
                "n_y": n_y,
                "x_range": list(x_range),
                "y_range": list(y_range),
                "quantity": quantity,
            },
            "x_name": "x",
            "y_name": "y",
        },
    )


def paraxial_field(x: float, y: float, inv_lambda: float, d: float, n_terms: int) -> complex:
    """Truncated paraxial field (1/d) sum_{|n|<=N} e((x/2 lambda)(d n/lambda)^2) e(n y/d)."""
    if n_terms < 0:
        raise DomainError("n_terms must be nonnegative")
    kappa = x * d * d * inv_lambda ** 3 / 2.0
    n = np.arange(-n_terms, n_terms + 1, dtype=float)
    phase = np.mod(kappa * n * n, 1.0) + np.mod(n * y / d, 1.0)
    return complex(np.sum(np.exp(2j * np.pi * phase)) / d)


def local_maxima(values, min_height: float = 0.0) -> np.ndarray:
    """Indices of strict interior local maxima of a 1-D profile above ``min_height``."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return np.array([], dtype=int)
    mid = v[1:-1]
    idx = np.flatnonzero((mid > v[:-2]) & (mid >= v[2:]) & (mid > min_height)) + 1
    return idx
