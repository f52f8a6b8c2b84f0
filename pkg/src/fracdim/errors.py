"""Exception types shared across the toolkit.

The CLI maps these onto its exit-status contract, so new error conditions
should reuse one of the classes below rather than raising bare ValueError.
"""


class FracdimError(Exception):
    """Base class for all toolkit errors."""


class DomainError(FracdimError, ValueError):
    """An input is outside the mathematical domain of an operation."""


class DimensionMismatchError(FracdimError, ValueError):
    """Quantities with different time exponents were combined additively."""


class SingularityError(FracdimError, ArithmeticError):
    """A coefficient or integrand crosses zero inside the solve range."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class TauRangeError(FracdimError, ValueError):
    """A requested dimensionless time exceeds the reachable range.

    ``supremum`` holds the best available estimate of lim tau(t) as t
    grows, so callers can see how far the scale actually reaches.
    """

    def __init__(self, message, supremum=None):
        super().__init__(message)
        self.supremum = supremum


class CsvParseError(FracdimError, ValueError):
    """A CSV input could not be parsed; ``line_number`` is 1-based."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class ConfigError(FracdimError, ValueError):
    """A CLI or problem-file configuration is invalid."""
