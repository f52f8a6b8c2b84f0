"""Time-dimension bookkeeping for fractional operators.

Swapping d/dt for a fractional operator changes the time exponent a term
carries: d/dt contributes sec^-1, the power-law-kernel derivative of
order alpha contributes sec^-alpha, and the exponential-kernel operator
is dimensionless.  To make homogeneity claims checkable for *every*
order at once, exponents are kept symbolic in alpha as

    rational_part + alpha_coefficient * alpha

with both parts exact rationals.  Two exponents are equal only when both
parts match, never by coincidence at one particular alpha.

Only the time dimension is tracked.  Charge, voltage and the like ride
along as opaque labels elsewhere; the homogeneity arguments this module
supports are entirely about powers of seconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError

# Reduced rational exponent of seconds. Fraction already guarantees
# gcd(|num|, den) == 1 and den >= 1, which is exactly the invariant needed.
TimeExponent = Fraction


@dataclass(frozen=True)
class DimExpr:
    """Symbolic time exponent: ``rational_part + alpha_coefficient * alpha``."""

    rational_part: Fraction = Fraction(0)
    alpha_coefficient: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rational_part", Fraction(self.rational_part))
        object.__setattr__(self, "alpha_coefficient", Fraction(self.alpha_coefficient))

    def __add__(self, other: "DimExpr") -> "DimExpr":
        return DimExpr(
            self.rational_part + other.rational_part,
            self.alpha_coefficient + other.alpha_coefficient,
        )

    def __sub__(self, other: "DimExpr") -> "DimExpr":
        return self + (-other)

    def __neg__(self) -> "DimExpr":
        return DimExpr(-self.rational_part, -self.alpha_coefficient)

    def __mul__(self, k) -> "DimExpr":
        k = Fraction(k)
        return DimExpr(self.rational_part * k, self.alpha_coefficient * k)

    __rmul__ = __mul__

    def evaluate(self, alpha: float) -> float:
        """Numeric exponent at one particular order."""
        return float(self.rational_part) + float(self.alpha_coefficient) * alpha

    @property
    def is_dimensionless(self) -> bool:
        return self.rational_part == 0 and self.alpha_coefficient == 0

    def __str__(self) -> str:
        r, c = self.rational_part, self.alpha_coefficient
        if c == 0:
            return str(r)
        if c == 1:
            alpha_term = "a"
        elif c == -1:
            alpha_term = "-a"
        else:
            alpha_term = f"{c}*a"
        if r == 0:
            return alpha_term
        sign = "+" if c > 0 else "-"
        mag = alpha_term.lstrip("-")
        return f"{r} {sign} {mag}"


DIMENSIONLESS = DimExpr(0)
TIME = DimExpr(1)
PER_TIME = DimExpr(-1)


@dataclass(frozen=True)
class DimensionedQuantity:
    """A real value tagged with its symbolic time exponent."""

    value: float
    dim: DimExpr = DIMENSIONLESS

    def __add__(self, other: "DimensionedQuantity") -> "DimensionedQuantity":
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"cannot add time exponents {self.dim} and {other.dim}"
            )
        return DimensionedQuantity(self.value + other.value, self.dim)

    def __sub__(self, other: "DimensionedQuantity") -> "DimensionedQuantity":
        return self + DimensionedQuantity(-other.value, other.dim)

    def __mul__(self, other):
        if isinstance(other, DimensionedQuantity):
            return DimensionedQuantity(self.value * other.value, self.dim + other.dim)
        return DimensionedQuantity(self.value * other, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DimensionedQuantity):
            return DimensionedQuantity(self.value / other.value, self.dim - other.dim)
        return DimensionedQuantity(self.value / other, self.dim)


def seconds(value: float) -> DimensionedQuantity:
    """A quantity carrying one power of time (e.g. the sigma parameter)."""
    return DimensionedQuantity(value, TIME)


# Exponent contributed by applying each derivative operator to a function.
# The sigma rule divides the power-law-kernel derivative by sigma^(1-alpha),
# so sec^-alpha picks up sec^(alpha-1) and lands back on sec^-1; the
# phi rescaling divides the dimensionless exponential-kernel operator by a
# function with units of seconds, with the same net effect.
_OPERATOR_DIMS = {
    "classical_ddt": DimExpr(-1),
    "caputo": DimExpr(0, -1),
    "caputo_fabrizio": DimExpr(0),
    "sigma_rescaled_caputo": DimExpr(-1),
    "phi_rescaled_cf": DimExpr(-1),
}


def dim_of_operator(kind: str) -> DimExpr:
    """Time exponent a derivative operator adds to its operand's."""
    try:
        return _OPERATOR_DIMS[kind]
    except KeyError:
        valid = ", ".join(sorted(_OPERATOR_DIMS))
        raise ValueError(f"unknown operator kind {kind!r}; expected one of: {valid}") from None


def check_homogeneity(terms) -> bool:
    """True iff every term carries the same symbolic time exponent.

    Symbolic equality means equality for all alpha in (0, 1], not at one
    sampled value.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("homogeneity check needs at least one term")
    first = terms[0]
    return all(term == first for term in terms)
