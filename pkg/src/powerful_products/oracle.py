"""Brute-force ground truth: factor every term, add exponents, test powerfulness."""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable

from .errors import BudgetExceeded, DomainError
from .primes import is_prime, primes_up_to
from .valuation import Instance

TRIAL_DIVISION_BOUND = 10_000
DEFAULT_TERM_BITS = 4096
DEFAULT_RHO_ITERATIONS = 2_000_000


class FactorMap(dict):
    """prime -> exponent. Exponents are always >= 1."""

    def merge(self, other: dict) -> "FactorMap":
        out = FactorMap(self)
        for p, e in other.items():
            out[p] = out.get(p, 0) + e
        return out

    def value(self) -> int:
        v = 1
        for p, e in self.items():
            v *= p**e
        return v

    def sorted(self) -> "FactorMap":
        return FactorMap(sorted(self.items()))

    @classmethod
    def combine(cls, maps: Iterable[dict]) -> "FactorMap":
        out = cls()
        for f in maps:
            for p, e in f.items():
                out[p] = out.get(p, 0) + e
        return out.sorted()


def is_powerful(f: dict) -> bool:
    return bool(f) and all(e >= 2 for e in f.values())


def _brent(n: int, rng: random.Random, max_iterations: int) -> int:
    """A nontrivial factor of the odd composite n, by Brent's cycle variant."""
    budget = max_iterations
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            budget -= r
            if budget <= 0 and g == 1:
                raise BudgetExceeded(
                    f"rho found no factor of a {n.bit_length()}-bit composite "
                    f"within {max_iterations} iterations"
                )
            r *= 2
        if g == n:
            while True:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                if g > 1:
                    break
        if g != n:
            return g
        # degenerate cycle: retry with fresh parameters


def factor_partial(
    m: int,
    *,
    bit_budget: int = DEFAULT_TERM_BITS,
    max_rho_iterations: int = DEFAULT_RHO_ITERATIONS,
    seed: int = 0,
) -> tuple[FactorMap, list[int]]:
    """Split m >= 1 as far as the budget allows.

    Returns the prime factors found and the composite cofactors left over.
    Cofactors wider than ``bit_budget`` bits are never handed to rho.
    """
    if m < 1:
        raise DomainError(f"cannot factor {m}")
    out = FactorMap()
    for p in primes_up_to(TRIAL_DIVISION_BOUND):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    rng = random.Random(seed)
    stack = [m] if m > 1 else []
    leftover = []
    while stack:
        c = stack.pop()
        if is_prime(c):
            out[c] = out.get(c, 0) + 1
            continue
        r = isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        if c.bit_length() > bit_budget:
            leftover.append(c)
            continue
        try:
            d = _brent(c, rng, max_rho_iterations)
        except BudgetExceeded:
            leftover.append(c)
            continue
        stack += [d, c // d]
    return out.sorted(), sorted(leftover)


def factor(
    m: int,
    *,
    bit_budget: int = DEFAULT_TERM_BITS,
    max_rho_iterations: int = DEFAULT_RHO_ITERATIONS,
    seed: int = 0,
) -> FactorMap:
    """Complete factorization of m >= 1.

    Raises BudgetExceeded rather than ever returning a partial answer.
    """
    if m >= 1 and m.bit_length() > bit_budget:
        raise BudgetExceeded(f"{m.bit_length()}-bit input exceeds budget of {bit_budget} bits")
    found, leftover = factor_partial(
        m, bit_budget=bit_budget, max_rho_iterations=max_rho_iterations, seed=seed
    )
    if leftover:
        raise BudgetExceeded(
            f"no factor of a {leftover[0].bit_length()}-bit composite "
            f"within {max_rho_iterations} rho iterations"
        )
    return found


def term_pieces(a: int, q: int, ell: int) -> list[int]:
    """Split a**ell + q**ell into its homogeneous cyclotomic factors.

    With x = -a and y = q the term is -(x**ell - y**ell), and x**d - y**d
    is the product of F_e(x, y) over e | d. The first piece is a + q.
    """
    x, y = -a, q
    divisors = [d for d in range(1, ell + 1) if ell % d == 0]
    found: dict[int, int] = {}
    for d in divisors:
        v = x**d - y**d
        for e, f in found.items():
            if d % e == 0:
                v //= f
        found[d] = v
    return [abs(v) for v in found.values()]


@lru_cache(maxsize=65536)
def _factor_term(
    a: int, q: int, ell: int, bit_budget: int, max_rho_iterations: int
) -> tuple[FactorMap, tuple[int, ...]]:
    found, leftover = [], []
    for piece in term_pieces(a, q, ell):
        f, rest = factor_partial(
            piece, bit_budget=bit_budget, max_rho_iterations=max_rho_iterations
        )
        found.append(f)
        leftover += rest
    return FactorMap.combine(found), tuple(leftover)


def factor_term(
    a: int,
    q: int,
    ell: int,
    *,
    bit_budget: int = DEFAULT_TERM_BITS,
    max_rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> FactorMap:
    found, leftover = _factor_term(a, q, ell, bit_budget, max_rho_iterations)
    if leftover:
        raise BudgetExceeded(
            f"term a = {a}: {len(leftover)} composite cofactor(s) left unsplit, "
            f"smallest {leftover[0].bit_length()} bits"
        )
    return FactorMap(found)


def product_factorization_partial(
    inst: Instance,
    *,
    bit_budget: int = DEFAULT_TERM_BITS,
    max_rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> tuple[FactorMap, dict[int, tuple[int, ...]]]:
    """Primes found across all terms, plus unsplit cofactors keyed by term index.

    Exponents in the map are lower bounds whenever cofactors remain.
    """
    maps, leftovers = [], {}
    for a in range(1, inst.n + 1):
        f, rest = _factor_term(a, inst.q, inst.ell, bit_budget, max_rho_iterations)
        maps.append(f)
        if rest:
            leftovers[a] = rest
    return FactorMap.combine(maps), leftovers


def product_factorization(
    inst: Instance,
    *,
    bit_budget: int = DEFAULT_TERM_BITS,
    max_rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> FactorMap:
    """Factorization of the whole product, assembled from its terms."""
    return FactorMap.combine(
        factor_term(
            a, inst.q, inst.ell, bit_budget=bit_budget, max_rho_iterations=max_rho_iterations
        )
        for a in range(1, inst.n + 1)
    )
