"""Powerfulness of the products (1^l + q^l)(2^l + q^l)...(n^l + q^l)."""

from .congruence import SolutionSet, solve_power_congruence, uniqueness_check, corollary1_applies
from .errors import (
    BudgetExceeded,
    DomainError,
    HypothesisError,
    IntegrityError,
    NotApplicable,
    NotPrimePower,
)
from .oracle import FactorMap, factor, is_powerful, product_factorization
from .primes import (
    PrimeWindow,
    find_window_prime,
    find_window_prime_not1modk,
    is_prime,
    prime_window,
    prime_window_k1,
)
from .valuation import Instance, TermValuation, Via, lte_valuation, nu, product_valuation, term_valuation
from .witness import (
    Certificate,
    NotPowerful,
    Powerful,
    Strategy,
    Unknown,
    check_instance,
    lemma2_check,
    min_threshold,
    theorem1_witness,
    theorem2_witness,
    verify_certificate,
)

__version__ = "0.1.0"
