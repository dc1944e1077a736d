from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from orbitlab.extensions import LabError


class NumericsError(LabError):
    pass


def round_shift(value: int, bits: int) -> int:
    """value / 2^bits rounded to nearest, halves up."""
    if bits <= 0:
        return value << -bits
    return (value + (1 << (bits - 1))) >> bits


@dataclass(frozen=True, eq=False)
class FixedPoint:
    """
    Dyadic real mantissa / 2^frac_bits.

    All arithmetic is exact integer arithmetic on the mantissa; mixing two
    different frac_bits in one operation is an error, not a silent rescale.
    """

    mantissa: int
    frac_bits: int

    def __post_init__(self):
        if self.frac_bits < 1:
            raise NumericsError(f"frac_bits must be positive, got {self.frac_bits}.")

    # ---------- constructors ----------
    @classmethod
    def from_int(cls, n: int, frac_bits: int) -> FixedPoint:
        return cls(n << frac_bits, frac_bits)

    @classmethod
    def from_fraction(cls, value: Fraction | int | str, frac_bits: int) -> FixedPoint:
        # "1/10", "0.05" и Fraction минават през едно място
        q = Fraction(value)
        num = 2 * q.numerator * (1 << frac_bits) + q.denominator
        return cls(num // (2 * q.denominator), frac_bits)

    @classmethod
    def zero(cls, frac_bits: int) -> FixedPoint:
        return cls(0, frac_bits)

    # ---------- helpers ----------
    @property
    def one(self) -> int:
        return 1 << self.frac_bits

    def _same(self, other: FixedPoint) -> int:
        if not isinstance(other, FixedPoint):
            raise TypeError(f"unsupported operand type: {type(other).__name__}")
        if other.frac_bits != self.frac_bits:
            raise NumericsError(
                f"frac_bits mismatch: {self.frac_bits} vs {other.frac_bits}"
            )
        return other.mantissa

    def rescale(self, frac_bits: int) -> FixedPoint:
        """Exact when widening, rounded to nearest when narrowing."""
        return FixedPoint(round_shift(self.mantissa, self.frac_bits - frac_bits), frac_bits)

    # ---------- arithmetic ----------
    def __add__(self, other: FixedPoint) -> FixedPoint:
        return FixedPoint(self.mantissa + self._same(other), self.frac_bits)

    def __sub__(self, other: FixedPoint) -> FixedPoint:
        return FixedPoint(self.mantissa - self._same(other), self.frac_bits)

    def __neg__(self) -> FixedPoint:
        return FixedPoint(-self.mantissa, self.frac_bits)

    def __abs__(self) -> FixedPoint:
        return FixedPoint(abs(self.mantissa), self.frac_bits)

    def __mul__(self, n: int) -> FixedPoint:
        # само по цяло число, иначе ще има закръгляне
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        return FixedPoint(self.mantissa * n, self.frac_bits)

    __rmul__ = __mul__

    # ---------- comparisons ----------
    def __eq__(self, other) -> bool:
        if not isinstance(other, FixedPoint):
            return NotImplemented
        return self.mantissa == other.mantissa and self.frac_bits == other.frac_bits

    def __hash__(self) -> int:
        return hash((self.mantissa, self.frac_bits))

    def __lt__(self, other: FixedPoint) -> bool:
        return self.mantissa < self._same(other)

    def __le__(self, other: FixedPoint) -> bool:
        return self.mantissa <= self._same(other)

    def __gt__(self, other: FixedPoint) -> bool:
        return self.mantissa > self._same(other)

    def __ge__(self, other: FixedPoint) -> bool:
        return self.mantissa >= self._same(other)

    # ---------- conversions ----------
    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, self.one)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def to_decimal(self, digits: int = 30) -> str:
        with localcontext() as ctx:
            ctx.prec = digits
            value = Decimal(self.mantissa) / Decimal(self.one)
        return format(value, "f")

    def __str__(self) -> str:
        return self.to_decimal()


@dataclass(frozen=True, eq=False)
class CirclePoint(FixedPoint):
    """A point of the circle, the value kept in (-0.5, 0.5]."""

    def __post_init__(self):
        super().__post_init__()
        half = 1 << (self.frac_bits - 1)
        if not (-half < self.mantissa <= half):
            raise NumericsError(f"{self.to_decimal()} is outside (-0.5, 0.5].")


@dataclass(frozen=True)
class PrecisionBudget:
    """N steps resolved at scale 1/t with g guard bits."""

    steps: int
    finest_scale: int
    guard_bits: int = 32

    @property
    def frac_bits(self) -> int:
        from orbitlab.numerics.services import precision_budget

        return precision_budget(self.steps, self.finest_scale, self.guard_bits)

    def working_bits(self, floor: int = 64) -> int:
        return max(self.frac_bits, floor)
