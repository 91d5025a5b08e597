"""Solutions of x**ell + q**ell = 0 (mod p)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import HypothesisError
from .primes import is_prime, prime_power_decomposition, primes_up_to


class SolveMethod(enum.Enum):
    UNIQUE = "unique"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class SolutionSet:
    p: int
    residues: tuple[int, ...]
    method: SolveMethod

    def __len__(self) -> int:
        return len(self.residues)

    def __contains__(self, x: int) -> bool:
        return x % self.p in self.residues


@lru_cache(maxsize=4096)
def _power_classes(ell: int, p: int) -> dict[int, tuple[int, ...]]:
    # r**ell mod p -> all r in [0, p) with that power, by a full scan
    classes: dict[int, list[int]] = {}
    for r in range(p):
        classes.setdefault(pow(r, ell, p), []).append(r)
    return {v: tuple(rs) for v, rs in classes.items()}


def exhaustive_solutions(ell: int, q: int, p: int) -> tuple[int, ...]:
    """Every residue r in [0, p) with r**ell + q**ell = 0 mod p, by scanning."""
    target = -pow(q, ell, p) % p
    return _power_classes(ell, p).get(target, ())


def unique_solution_applies(ell: int, p: int) -> bool:
    """Whether the single-root shortcut is licensed: ell odd, p odd, gcd(ell, p-1) = 1."""
    return ell % 2 == 1 and p % 2 == 1 and gcd(ell, p - 1) == 1


def solve_power_congruence(ell: int, q: int, p: int) -> SolutionSet:
    if unique_solution_applies(ell, p):
        return SolutionSet(p, ((-q) % p,), SolveMethod.UNIQUE)
    return SolutionSet(p, exhaustive_solutions(ell, q, p), SolveMethod.EXHAUSTIVE)


def corollary1_applies(ell: int, p: int) -> bool:
    """For ell = k**s with k an odd prime: True iff k does not divide p - 1.

    Raises NotPrimePower otherwise.
    """
    k, _ = prime_power_decomposition(ell)
    return (p - 1) % k != 0


def uniqueness_check(ell: int, q: int, p: int) -> bool:
    """Scan all residues and confirm -q mod p is the only root.

    Does not touch the shortcut in ``solve_power_congruence``.
    """
    if not is_prime(p):
        raise HypothesisError(f"p = {p} is not prime")
    if ell % 2 == 0:
        raise HypothesisError(f"ell = {ell} is even")
    if gcd(ell, p - 1) != 1:
        raise HypothesisError(f"gcd(ell, p - 1) = {gcd(ell, p - 1)} != 1")
    return exhaustive_solutions(ell, q, p) == ((-q) % p,)


def unique_root_sweep(p_max: int, q_max: int, ells) -> tuple[int, list[tuple[int, int, int]]]:
    """Run ``uniqueness_check`` over every admissible (p, q, ell).

    Returns the number of cases checked and the failing (ell, q, p) triples.
    """
    checked = 0
    failures = []
    for p in primes_up_to(p_max):
        for ell in ells:
            if ell % 2 == 0 or gcd(ell, p - 1) != 1:
                continue
            for q in range(1, q_max + 1):
                checked += 1
                if not uniqueness_check(ell, q, p):
                    failures.append((ell, q, p))
    return checked, failures
