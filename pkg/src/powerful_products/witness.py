"""Certificates that a product is not powerful, and the search for them.

A certificate names a prime p whose exponent in the product is exactly one,
together with every term p divides and that term's valuation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd
from typing import Optional, Union

from .errors import HypothesisError, IntegrityError, NotApplicable, NotPrimePower
from .oracle import (
    DEFAULT_RHO_ITERATIONS,
    DEFAULT_TERM_BITS,
    FactorMap,
    is_powerful,
    product_factorization_partial,
)
from .primes import (
    find_window_prime_not1modk,
    is_prime,
    prime_power_decomposition,
    primes_up_to,
    window_primes,
)
from .valuation import Instance, TermValuation, nu, product_valuation, term_valuations

DEFAULT_PRODUCT_BITS = 200_000
QUICK_RHO_ITERATIONS = 20_000


class Strategy(enum.Enum):
    THEOREM1 = "theorem1"
    THEOREM2_SEARCH = "theorem2"
    ORACLE_EXPONENT = "oracle"


@dataclass(frozen=True)
class Certificate:
    instance: Instance
    p: int
    strategy: Strategy
    hits: tuple[TermValuation, ...]
    total_valuation: int


@dataclass(frozen=True)
class NotPowerful:
    certificate: Certificate


@dataclass(frozen=True)
class Powerful:
    factors: FactorMap

    def __post_init__(self):
        if not is_powerful(self.factors):
            raise IntegrityError(f"not a powerful factorization: {dict(self.factors)}")


@dataclass(frozen=True)
class Unknown:
    reason: str


Verdict = Union[NotPowerful, Powerful, Unknown]


def _certify(inst: Instance, p: int, strategy: Strategy) -> Optional[Certificate]:
    hits = tuple(term_valuations(inst, p))
    total = sum(h.nu for h in hits)
    if total != 1:
        return None
    return Certificate(inst, p, strategy, hits, total)


def verify_certificate(cert: Certificate) -> bool:
    """Recheck a certificate from scratch.

    Every term is reduced mod p and every hit's valuation recomputed by plain
    division of the exact term; no congruence shortcut or LTE is used.
    """
    inst, p = cert.instance, cert.p
    if not is_prime(p) or cert.total_valuation != 1:
        return False
    direct = {}
    for a in range(1, inst.n + 1):
        if (pow(a, inst.ell, p) + pow(inst.q, inst.ell, p)) % p == 0:
            direct[a] = nu(p, inst.term(a))
    claimed = {h.a: h.nu for h in cert.hits}
    return (
        claimed == direct
        and all(h.p == p for h in cert.hits)
        and sum(direct.values()) == 1
    )


def prime_power_bound(q: int) -> int:
    return max(q, 11 - q)


def lemma2_check(q: int, ell: int, p: int, n: int) -> bool:
    """Whether n lies in [p - q, 2p - q - 1], where p has exponent exactly one.

    When it does, the exponent is recomputed and must equal 1.
    """
    k, _ = prime_power_decomposition(ell)
    if not is_prime(p):
        raise HypothesisError(f"p = {p} is not prime")
    if p <= q:
        raise HypothesisError(f"need p > q, got p = {p}, q = {q}")
    if p == k:
        raise HypothesisError(f"need p != k = {k}")
    if (p - 1) % k == 0:
        raise HypothesisError(f"k = {k} divides p - 1 = {p - 1}")
    if not p - q <= n <= 2 * p - q - 1:
        return False
    v = product_valuation(Instance(q, ell, n), p)
    if v != 1:
        raise IntegrityError(f"exponent of {p} is {v} for q={q}, ell={ell}, n={n}")
    return True


def theorem1_witness(q: int, ell: int, n: int) -> Certificate:
    """Certificate from the smallest prime p in ((n+q)/2, n+q] with p != k, k not | p - 1.

    Needs ell = k**s for an odd prime k and n >= max(q, 11 - q).
    """
    inst = Instance(q, ell, n)
    try:
        k, _ = prime_power_decomposition(ell)
    except NotPrimePower as exc:
        raise NotApplicable(str(exc)) from exc
    if n < prime_power_bound(q):
        raise NotApplicable(f"n = {n} < max(q, 11 - q) = {prime_power_bound(q)}")
    p = find_window_prime_not1modk(n + q - 1, k)
    if p is None:
        raise IntegrityError(f"no admissible prime in ({(n + q) / 2}, {n + q}] for k = {k}")
    cert = _certify(inst, p, Strategy.THEOREM1)
    if cert is None:
        raise IntegrityError(
            f"exponent of {p} is {product_valuation(inst, p)} for q={q}, ell={ell}, n={n}"
        )
    return cert


def theorem2_witness(q: int, ell: int, n: int) -> Optional[Certificate]:
    """Certificate from the smallest p in P(n+q-1) with p = 2 mod ell and p > q.

    Returns None when the window holds no such prime.
    """
    inst = Instance(q, ell, n)
    for p in window_primes(n + q - 1):
        if p % ell != 2 % ell or p <= q or gcd(p - 1, ell) != 1:
            continue
        cert = _certify(inst, p, Strategy.THEOREM2_SEARCH)
        if cert is not None:
            return cert
    return None


def exponent_one_scan(inst: Instance) -> Optional[Certificate]:
    """Smallest prime p <= n + q whose exponent in the product is one."""
    for p in primes_up_to(inst.n + inst.q):
        cert = _certify(inst, p, Strategy.ORACLE_EXPONENT)
        if cert is not None:
            return cert
    return None


def find_certificate(inst: Instance, *, scan: bool = True) -> Optional[Certificate]:
    """Try the cheap certificate strategies in order; None if all fail."""
    try:
        return theorem1_witness(inst.q, inst.ell, inst.n)
    except NotApplicable:
        pass
    cert = theorem2_witness(inst.q, inst.ell, inst.n)
    if cert is None and scan:
        cert = exponent_one_scan(inst)
    return cert


def product_bits_upper_bound(inst: Instance) -> int:
    return sum(inst.ell * max(a, inst.q).bit_length() + 1 for a in range(1, inst.n + 1))


def check_instance(
    inst: Instance,
    *,
    bit_budget: int = DEFAULT_PRODUCT_BITS,
    term_bits: int = DEFAULT_TERM_BITS,
    max_rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> Verdict:
    """Decide whether the product is powerful.

    Certificate strategies run first (cheapest first); full factorization is
    the last resort and only for products within ``bit_budget`` bits.
    """
    cert = find_certificate(inst)
    if cert is not None:
        return NotPowerful(cert)
    if product_bits_upper_bound(inst) > bit_budget:
        return Unknown(f"product exceeds the {bit_budget}-bit oracle budget")
    # a cheap rho pass first: one exponent-one prime settles the instance
    # even when some cofactor never splits
    for iterations in sorted({min(QUICK_RHO_ITERATIONS, max_rho_iterations), max_rho_iterations}):
        factors, leftovers = product_factorization_partial(
            inst, bit_budget=term_bits, max_rho_iterations=iterations
        )
        if not leftovers:
            break
        for p in factors:
            cert = _certify(inst, p, Strategy.ORACLE_EXPONENT)
            if cert is not None:
                return NotPowerful(cert)
    if leftovers:
        a = min(leftovers)
        return Unknown(
            f"factorization gave up: term a = {a} has an unsplit "
            f"{leftovers[a][0].bit_length()}-bit cofactor"
        )
    singles = [p for p, e in factors.items() if e == 1]
    if not singles:
        return Powerful(factors)
    cert = _certify(inst, singles[0], Strategy.ORACLE_EXPONENT)
    if cert is None:
        raise IntegrityError(f"oracle exponent of {singles[0]} disagrees with valuation")
    return NotPowerful(cert)


@dataclass(frozen=True)
class ThresholdScan:
    """Per-n certificate success for one (q, ell).

    ``last_failure`` is the largest n <= n_max without a certificate. It is an
    empirical observation over a finite range, not a proven threshold.
    """

    q: int
    ell: int
    n_max: int
    rows: tuple[tuple[int, bool], ...]

    @property
    def last_failure(self) -> Optional[int]:
        return max((n for n, found in self.rows if not found), default=None)

    @property
    def empirical_threshold(self) -> int:
        lf = self.last_failure
        return 1 if lf is None else lf + 1


def min_threshold(
    q: int, ell: int, n_max: int, *, bit_budget: int = DEFAULT_PRODUCT_BITS
) -> ThresholdScan:
    """For each n <= n_max, whether some strategy certifies non-powerfulness.

    Powerful and undecided instances both count as failures.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    rows = tuple(
        (n, isinstance(check_instance(Instance(q, ell, n), bit_budget=bit_budget), NotPowerful))
        for n in range(1, n_max + 1)
    )
    return ThresholdScan(q, ell, n_max, rows)
