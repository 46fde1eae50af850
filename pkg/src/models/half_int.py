from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import sympy

HalfIntLike = Union[int, float, Fraction, "HalfInt"]


@dataclass(frozen=True, order=True)
class HalfInt:
    """Angular momentum quantum number stored as twice its value, so 3/2 is exact."""

    twice_value: int

    @classmethod
    def of(cls, value: HalfIntLike) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        twice = 2 * value
        if abs(twice - round(twice)) > 1e-9:
            raise ValueError(f"{value} is neither integer nor half-integer")
        return cls(int(round(twice)))

    @property
    def value(self) -> float:
        return self.twice_value / 2

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def as_rational(self) -> sympy.Rational:
        return sympy.Rational(self.twice_value, 2)

    def admits(self, projection: "HalfInt") -> bool:
        """True when `projection` is a valid m for this j."""
        projection = HalfInt.of(projection)
        return (
            abs(projection.twice_value) <= self.twice_value
            and (self.twice_value - projection.twice_value) % 2 == 0
        )

    def projections(self) -> Iterator["HalfInt"]:
        """m = -j, -j+1, ..., j."""
        for twice_m in range(-self.twice_value, self.twice_value + 1, 2):
            yield HalfInt(twice_m)

    def multiplicity(self) -> int:
        return self.twice_value + 1

    def index_of(self, projection: HalfIntLike) -> int:
        """Position of m in the ascending basis -j..j."""
        projection = HalfInt.of(projection)
        return (projection.twice_value + self.twice_value) // 2

    def __add__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __rsub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(HalfInt.of(other).twice_value - self.twice_value)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice_value)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice_value))

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def half(value: HalfIntLike) -> HalfInt:
    return HalfInt.of(value)
