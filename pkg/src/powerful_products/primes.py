"""Primality, sieving and the half-open prime windows P(m) = ((m+1)/2, m+1].

Window bounds are handled in integer arithmetic only: ``p > (m+1)/2`` is the
same as ``p > (m+1)//2`` for integer ``p``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, NotPrimePower

# Strong-pseudoprime bases 2..41 are exact below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)

# Above this, windows are sieved segment-wise instead of growing the cache.
SIEVE_CACHE_CAP = 1 << 25


def is_prime(m: int) -> bool:
    """Miller-Rabin with fixed bases.

    Exact for ``m < MR_DETERMINISTIC_LIMIT`` (well past 64 bits); above that
    the answer is a strong probable-prime test to 13 bases.
    """
    if m < 2:
        return False
    for p in _SMALL_PRIMES:
        if m % p == 0:
            return m == p
    d = m - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def sieve_flags(limit: int) -> np.ndarray:
    """Boolean primality flags for 0..limit inclusive."""
    flags = np.ones(max(limit + 1, 2), dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags[: limit + 1]


def segmented_primes(lo: int, hi: int) -> np.ndarray:
    """Primes in the closed interval [lo, hi], sieving only that segment."""
    lo = max(lo, 2)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in _cache.primes_up_to(isqrt(hi)).tolist():
        start = max(p * p, -(-lo // p) * p)
        if start > hi:
            continue
        mask[start - lo :: p] = False
    return np.flatnonzero(mask).astype(np.int64) + lo


class _SieveCache:
    """Sorted primes up to a growing limit.

    The array is replaced wholesale, never mutated, so readers need no lock.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        limit = 1 << 16
        # (limit, primes) swapped as one reference
        self._state = (limit, np.flatnonzero(sieve_flags(limit)).astype(np.int64))

    def primes_up_to(self, limit: int) -> np.ndarray:
        have, primes = self._state
        if limit > have:
            with self._lock:
                have, primes = self._state
                if limit > have:
                    new_limit = max(limit, 2 * have)
                    primes = np.flatnonzero(sieve_flags(new_limit)).astype(np.int64)
                    self._state = (new_limit, primes)
        return primes[: np.searchsorted(primes, limit, side="right")]


_cache = _SieveCache()


def primes_between(lo: int, hi: int) -> list[int]:
    """Sorted primes p with lo <= p <= hi."""
    if hi < max(lo, 2):
        return []
    if hi <= SIEVE_CACHE_CAP:
        primes = _cache.primes_up_to(hi)
        return primes[np.searchsorted(primes, lo) :].tolist()
    return segmented_primes(lo, hi).tolist()


def primes_up_to(limit: int) -> list[int]:
    return primes_between(2, limit)


@dataclass(frozen=True)
class PrimeWindow:
    m: int
    primes: tuple[int, ...]
    k: Optional[int] = None
    primes_k1: tuple[int, ...] = field(default=())


def _window_bounds(m: int) -> tuple[int, int]:
    if m < 1:
        raise DomainError(f"window index must be positive, got {m}")
    return (m + 1) // 2 + 1, m + 1


def window_primes(m: int) -> list[int]:
    """The members of P(m), ascending."""
    return primes_between(*_window_bounds(m))


def prime_window(m: int) -> PrimeWindow:
    return PrimeWindow(m=m, primes=tuple(window_primes(m)))


def prime_window_k1(m: int, k: int) -> PrimeWindow:
    """P(m) together with its subset P(m; k, 1) of primes congruent to 1 mod k."""
    if k == 2 or not is_prime(k):
        raise DomainError(f"k must be an odd prime, got {k}")
    primes = tuple(window_primes(m))
    return PrimeWindow(
        m=m, primes=primes, k=k, primes_k1=tuple(p for p in primes if p % k == 1)
    )


def find_window_prime(
    m: int, modulus: int, residue: int, exclusions: Iterable[int] = ()
) -> Optional[int]:
    """Smallest p in P(m) with p = residue (mod modulus), skipping exclusions."""
    if modulus < 1:
        raise DomainError(f"modulus must be positive, got {modulus}")
    residue %= modulus
    excluded = set(exclusions)
    for p in window_primes(m):
        if p % modulus == residue and p not in excluded:
            return p
    return None


def find_window_prime_not1modk(m: int, k: int) -> Optional[int]:
    """Smallest p in P(m) with p != k and p not congruent to 1 mod k."""
    for p in window_primes(m):
        if p != k and p % k != 1:
            return p
    return None


def prime_power_decomposition(ell: int) -> tuple[int, int]:
    """Return (k, s) with ell == k**s and k an odd prime."""
    if ell < 3 or ell % 2 == 0:
        raise NotPrimePower(f"{ell} is not a power of an odd prime")
    k = next((d for d in range(3, isqrt(ell) + 1, 2) if ell % d == 0), ell)
    s, rest = 0, ell
    while rest % k == 0:
        rest //= k
        s += 1
    if rest != 1:
        raise NotPrimePower(f"{ell} has more than one prime factor")
    return k, s


# Bulk sweeps over every window up to a bound, via prefix counts.


def window_counts(m_max: int, modulus: int = 1, residue: int = 0) -> np.ndarray:
    """counts[m] = #{p in P(m) : p = residue mod modulus} for 0 <= m <= m_max.

    counts[0] is meaningless and left at whatever the formula gives.
    """
    flags = sieve_flags(m_max + 1)
    if modulus > 1:
        idx = np.arange(flags.size)
        flags = flags & (idx % modulus == residue % modulus)
    prefix = np.concatenate(([0], np.cumsum(flags, dtype=np.int64)))
    # prefix[x + 1] = number of flagged integers <= x
    m = np.arange(m_max + 1)
    return prefix[m + 2] - prefix[(m + 1) // 2 + 1]


SPARSE_WINDOWS = frozenset({1, 3, 5, 9})


def sparse_window_counterexamples(m_max: int) -> list[int]:
    """m in [1, m_max], outside the known exceptions, with |P(m)| < 2."""
    counts = window_counts(m_max)
    bad = np.flatnonzero(counts < 2)
    return [int(m) for m in bad if m >= 1 and m not in SPARSE_WINDOWS]


def residue_one_counterexamples(k: int, m_max: int) -> list[int]:
    """m in [4k, m_max] with |P(m)| <= |P(m; k, 1)|. Stated for primes k >= 5."""
    if k < 5 or not is_prime(k):
        raise DomainError(f"k must be a prime >= 5, got {k}")
    total = window_counts(m_max)
    ones = window_counts(m_max, k, 1)
    bad = np.flatnonzero(total <= ones)
    return [int(m) for m in bad if m >= 4 * k]


def two_mod_three_counterexamples(m_max: int) -> list[int]:
    """m in [4, m_max], m != 9, whose window has no prime congruent to 2 mod 3."""
    counts = window_counts(m_max, 3, 2)
    bad = np.flatnonzero(counts == 0)
    return [int(m) for m in bad if m >= 4 and m != 9]
