"""
Generalized quadratic Gauss sums

    G(a, b; q) = sum_{n=0}^{q-1} e((a n^2 + b n) / q),   e(x) = exp(2 pi i x)

together with the integer criteria describing when they vanish, their modulus,
and the b-independent phase obtained after multiplying by e((4a)_* b^2 / q).

All exponents are reduced modulo the denominator in integer arithmetic before
any floating point is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractViolation, NoInverseError

__all__ = [
    "GaussTriple",
    "FourAStar",
    "e_frac",
    "gauss_sum",
    "gauss_sum_row",
    "gauss_vanishes",
    "gauss_modulus_sq",
    "mod_inverse",
    "four_a_star",
    "phase_normalized_gauss",
    "zero_tolerance",
]

# Rows of the (b, n) exponent table evaluated per block in gauss_sum_row.
_ROW_BLOCK = 1 << 20


def zero_tolerance(q: int) -> float:
    """Threshold below which |G(a, b; q)| counts as zero in float comparisons."""
    return 1e-9 * math.sqrt(q)


def e_frac(k, m):
    """exp(2 pi i k / m) for integer k (scalar or array) and modulus m >= 1.

    ``k`` is reduced into [0, m) exactly before the division, so large
    numerators do not lose precision.
    """
    k = np.mod(np.asarray(k, dtype=np.int64), m)
    out = np.exp(2j * np.pi * (k / m))
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GaussTriple:
    """Validated (a, b, q) with q >= 1 and gcd(a, q) = 1."""

    a: int
    b: int
    q: int

    def __post_init__(self):
        if int(self.q) < 1:
            raise ContractViolation(f"q must be positive, got {self.q}")
        if math.gcd(int(self.a), int(self.q)) != 1:
            raise ContractViolation(f"gcd(a, q) != 1 for a={self.a}, q={self.q}")

    @property
    def value(self) -> complex:
        return gauss_sum(self.a, self.b, self.q)

    @property
    def vanishes(self) -> bool:
        return gauss_vanishes(self.a, self.b, self.q)

    @property
    def modulus_sq(self) -> float:
        return gauss_modulus_sq(self.a, self.b, self.q)

    def as_dict(self) -> dict:
        g = self.value
        return {
            "a": self.a,
            "b": self.b,
            "q": self.q,
            "re": g.real,
            "im": g.imag,
            "modulus_sq": self.modulus_sq,
            "vanishes": self.vanishes,
        }


def gauss_sum(a: int, b: int, q: int) -> complex:
    """Evaluate G(a, b; q) by direct summation with exact phase reduction."""
    GaussTriple(a, b, q)
    n = np.arange(q, dtype=np.int64)
    k = ((a % q) * (n * n % q) + (b % q) * n) % q
    return complex(np.sum(e_frac(k, q)))


def gauss_sum_row(a: int, q: int, bs=None) -> np.ndarray:
    """G(a, b; q) for every b in ``bs`` (default: all residues 0..q-1)."""
    GaussTriple(a, 0, q)
    bs = np.arange(q, dtype=np.int64) if bs is None else np.asarray(bs, dtype=np.int64)
    n = np.arange(q, dtype=np.int64)
    quad = (a % q) * (n * n % q) % q
    out = np.empty(bs.shape, dtype=complex)
    flat_b = bs.reshape(-1) % q
    flat_out = out.reshape(-1)
    step = max(1, _ROW_BLOCK // max(q, 1))
    for start in range(0, flat_b.size, step):
        blk = flat_b[start:start + step]
        k = (quad[None, :] + blk[:, None] * n[None, :]) % q
        flat_out[start:start + step] = np.exp(2j * np.pi * (k / q)).sum(axis=1)
    return out


def gauss_vanishes(a: int, b: int, q: int) -> bool:
    """True iff G(a, b; q) = 0, i.e. iff 4 divides 2(b + 1) + q."""
    GaussTriple(a, b, q)
    return (2 * (b + 1) + q) % 4 == 0


def gauss_modulus_sq(a: int, b: int, q: int) -> float:
    """|G(a, b; q)|^2 from the closed form: q for odd q, 0 or 2q for even q."""
    GaussTriple(a, b, q)
    if q % 2:
        return float(q)
    return 2.0 * q if (a * (q // 2) + b) % 2 == 0 else 0.0


def mod_inverse(a: int, q: int) -> int:
    """Inverse of a modulo q, normalized to [0, q)."""
    if q < 1:
        raise ContractViolation(f"modulus must be positive, got {q}")
    if math.gcd(a, q) != 1:
        raise NoInverseError(f"{a} has no inverse modulo {q}")
    if q == 1:
        return 0
    return pow(a, -1, q)


@dataclass(frozen=True)
class FourAStar:
    """Exact value of (4a)_*: an integer for odd q, a quarter of an odd integer for even q."""

    numerator: int
    denominator: int
    q: int

    def __post_init__(self):
        if self.denominator not in (1, 4):
            raise ContractViolation("denominator must be 1 or 4")
        if self.q % 2 == 0 and (self.denominator != 4 or self.numerator % 2 == 0):
            raise ContractViolation("even q requires an odd numerator over 4")
        if self.q % 2 == 1 and self.denominator != 1:
            raise ContractViolation("odd q requires an integer value")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def defect(self, a: int) -> Fraction:
        """(4a)_* * 4a - 1; an integer multiple of q by construction."""
        return self.value * 4 * a - 1


def four_a_star(a: int, q: int) -> FourAStar:
    """(4a)_* with the quarter-integer convention a_*/4 when q is even."""
    if math.gcd(a, q) != 1:
        raise NoInverseError(f"{a} has no inverse modulo {q}")
    if q % 2:
        return FourAStar(mod_inverse((4 * a) % q, q), 1, q)
    # an inverse of a modulo an even q is necessarily odd
    return FourAStar(mod_inverse(a, q), 4, q)


def phase_normalized_gauss(a: int, b: int, q: int, star: FourAStar | None = None) -> complex:
    """e((4a)_* b^2 / q) * G(a, b; q).

    Zero exactly when G vanishes; otherwise a constant G_{a,q} independent of
    b.  ``star`` overrides the representative of (4a)_* (the default uses
    a_* in [0, q)).
    """
    star = four_a_star(a, q) if star is None else star
    if gauss_vanishes(a, b, q):
        return 0j
    den = star.denominator * q
    return e_frac(star.numerator * (b * b % den), den) * gauss_sum(a, b, q)
