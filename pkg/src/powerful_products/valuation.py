"""p-adic valuations of the terms a**ell + q**ell and of their product.

The product is never formed; its valuation is summed term by term.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from .congruence import exhaustive_solutions, unique_solution_applies
from .errors import DomainError, HypothesisError


@dataclass(frozen=True)
class Instance:
    """The product (1**ell + q**ell)(2**ell + q**ell)...(n**ell + q**ell)."""

    q: int
    ell: int
    n: int

    def __post_init__(self):
        for name in ("q", "ell", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an int, got {value!r}")
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.ell % 2 == 0:
            raise ValueError(f"ell must be odd, got {self.ell}")

    def term(self, a: int) -> int:
        return a**self.ell + self.q**self.ell

    def terms(self) -> Iterator[int]:
        return (self.term(a) for a in range(1, self.n + 1))


class Via(enum.Enum):
    LTE = "lte"
    DIRECT = "direct"


@dataclass(frozen=True)
class TermValuation:
    a: int
    p: int
    nu: int
    via: Via


def nu(p: int, m: int) -> int:
    """Exponent of the prime p in m."""
    if m == 0:
        raise DomainError("valuation of 0 is undefined")
    m = abs(m)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


def _lte_hypotheses_hold(x: int, y: int, p: int) -> bool:
    return p % 2 == 1 and (x + y) % p == 0 and x % p != 0 and y % p != 0


def lte_valuation(x: int, y: int, ell: int, p: int) -> int:
    """nu_p(x**ell + y**ell) via lifting the exponent.

    Requires p an odd prime, p | x + y, p coprime to x and y, and ell odd;
    raises HypothesisError naming the first one that fails.
    """
    if p % 2 == 0:
        raise HypothesisError(f"p = {p} must be odd")
    if ell < 1 or ell % 2 == 0:
        raise HypothesisError(f"ell = {ell} must be a positive odd integer")
    if (x + y) % p != 0:
        raise HypothesisError(f"p = {p} does not divide x + y = {x + y}")
    if x % p == 0 or y % p == 0:
        raise HypothesisError(f"p = {p} divides x or y")
    return nu(p, x + y) + nu(p, ell)


def term_valuation(inst: Instance, a: int, p: int) -> TermValuation:
    if not 1 <= a <= inst.n:
        raise DomainError(f"a = {a} outside [1, {inst.n}]")
    if _lte_hypotheses_hold(a, inst.q, p):
        return TermValuation(a, p, lte_valuation(a, inst.q, inst.ell, p), Via.LTE)
    return TermValuation(a, p, nu(p, inst.term(a)), Via.DIRECT)


def hit_indices(inst: Instance, p: int) -> list[int]:
    """All a in [1, n] with p | a**ell + q**ell, found modulo p."""
    q, ell, n = inst.q, inst.ell, inst.n
    if unique_solution_applies(ell, p):
        residues = ((-q) % p,)
    elif p > n:
        qe = pow(q, ell, p)
        return [a for a in range(1, n + 1) if (pow(a, ell, p) + qe) % p == 0]
    else:
        residues = exhaustive_solutions(ell, q, p)
    hits = []
    for r in residues:
        hits.extend(range(r or p, n + 1, p))
    hits.sort()
    return hits


def term_valuations(inst: Instance, p: int) -> list[TermValuation]:
    """Every term divisible by p, with its exact valuation."""
    return [term_valuation(inst, a, p) for a in hit_indices(inst, p)]


def product_valuation(inst: Instance, p: int) -> int:
    return sum(tv.nu for tv in term_valuations(inst, p))
