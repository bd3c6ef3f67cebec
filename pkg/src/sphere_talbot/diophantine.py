"""Continued fractions, convergents and the error indicator for irrational times."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .legendre_kernel import normalization_constant

__all__ = ["Convergent", "continued_fraction", "convergents", "error_indicator"]

MAX_TERMS = 40
# A residual whose reciprocal exceeds this is treated as zero (rational input).
_RECIPROCAL_CAP = 1e12


@dataclass(frozen=True)
class Convergent:
    a: int
    q: int
    epsilon: float

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.a, self.q)

    def as_dict(self) -> dict:
        return {"a": self.a, "q": self.q, "epsilon": self.epsilon}


def continued_fraction(x, max_terms: int = MAX_TERMS) -> list[int]:
    """Partial quotients [0; c1, c2, ...] of x in (0, 1).

    Floats are expanded exactly as the binary fraction they represent,
    stopping once the residual reciprocal exceeds 1e12; a Fraction input is
    expanded to the end.
    """
    if not 0 < x < 1:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    if not 1 <= max_terms <= MAX_TERMS:
        raise DomainError(f"max_terms must lie in [1, {MAX_TERMS}]")
    # a float is an exact dyadic rational; expanding it exactly keeps
    # rounding noise out of the residuals
    exact = isinstance(x, Fraction)
    rem = x if exact else Fraction(float(x))
    terms = [0]
    while len(terms) < max_terms:
        if not exact and 1 / rem > _RECIPROCAL_CAP:
            break
        inv = 1 / rem
        c = math.floor(inv)
        terms.append(c)
        rem = inv - c
        if rem == 0:
            break
    return terms


def _epsilon(x, a: int, q: int) -> float:
    if isinstance(x, Fraction):
        return float(q * q * abs(x - Fraction(a, q)))
    return q * q * abs(float(x) - a / q)


def convergents(x, n: int) -> list[Convergent]:
    """First ``n`` convergents a/q of x in (0, 1), skipping the trivial 0/1."""
    terms = continued_fraction(x, min(MAX_TERMS, n + 1))
    p_prev, p = 1, terms[0]
    q_prev, q = 0, 1
    out = []
    for c in terms[1:]:
        p_prev, p = p, c * p + p_prev
        q_prev, q = q, c * q + q_prev
        out.append(Convergent(p, q, _epsilon(x, p, q)))
        if len(out) == n:
            break
    return out


def error_indicator(c: Convergent, r: float, theta: float) -> float:
    """Heuristic size of Psi(theta, t) - Psi(theta, 2 pi a/q) with unit implied constants.

    E = eps c_r |log theta| (q^{-1/2} + min((1-r) sqrt q, 1)) / ((1-r)^3 q^2).
    Only meant for ranking candidate denominators, not as a certified bound.
    """
    if not 0.0 < theta <= math.pi:
        raise DomainError("theta must lie in (0, pi]")
    q = c.q
    num = q ** -0.5 + min((1.0 - r) * math.sqrt(q), 1.0)
    return c.epsilon * normalization_constant(r) * abs(math.log(theta)) * num / ((1.0 - r) ** 3 * q * q)
