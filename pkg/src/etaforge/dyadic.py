"""Exact dyadic rationals: values of the dimension functional and of
fractional parts in Z[1/2]/Z."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["DyadicRational"]


@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2^exponent in canonical form (odd numerator or zero)."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        num, exp = int(self.numerator), int(self.exponent)
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        else:
            while num % 2 == 0 and exp > 0:
                num //= 2
                exp -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_fraction(cls, frac):
        frac = Fraction(frac)
        den = frac.denominator
        exp = 0
        while den % 2 == 0:
            den //= 2
            exp += 1
        if den != 1:
            raise ValueError(f"{frac} is not dyadic")
        return cls(frac.numerator, exp)

    @classmethod
    def from_integer(cls, n):
        return cls(int(n), 0)

    def as_fraction(self):
        return Fraction(self.numerator, 1 << self.exponent)

    def __add__(self, other):
        other = _coerce(other)
        e = max(self.exponent, other.exponent)
        num = (self.numerator << (e - self.exponent)) + \
              (other.numerator << (e - other.exponent))
        return DyadicRational(num, e)

    def __neg__(self):
        return DyadicRational(-self.numerator, self.exponent)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __mul__(self, other):
        other = _coerce(other)
        return DyadicRational(self.numerator * other.numerator,
                              self.exponent + other.exponent)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, DyadicRational)):
            other = _coerce(other)
            return (self.numerator, self.exponent) == \
                   (other.numerator, other.exponent)
        return self.as_fraction() == other

    def __hash__(self):
        return hash(self.as_fraction())

    def floor(self):
        num, exp = self.numerator, self.exponent
        return num >> exp if num >= 0 else -((-num + (1 << exp) - 1) >> exp)

    def fractional_part(self):
        """Representative of the class in Z[1/2]/Z, taken in [0, 1)."""
        return self - DyadicRational(self.floor())

    def is_integer(self):
        return self.exponent == 0

    def is_half_integer(self):
        return self.exponent <= 1

    def __float__(self):
        return self.numerator / (1 << self.exponent)

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.exponent}"


def _coerce(val):
    if isinstance(val, DyadicRational):
        return val
    if isinstance(val, int):
        return DyadicRational(val)
    return DyadicRational.from_fraction(val)
