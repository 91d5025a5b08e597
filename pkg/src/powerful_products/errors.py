"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a number-theoretic function."""


class HypothesisError(ValueError):
    """A result was applied without one of its hypotheses holding."""


class NotPrimePower(ValueError):
    """The exponent is not of the form k**s with k an odd prime."""


class NotApplicable(ValueError):
    """A witness strategy's preconditions do not hold for this instance."""


class IntegrityError(RuntimeError):
    """A proven statement failed to hold: always an implementation bug."""


class BudgetExceeded(RuntimeError):
    """Factoring gave up within its configured budget."""
