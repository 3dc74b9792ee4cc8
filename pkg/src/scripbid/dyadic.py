"""Exact dyadic rationals ``numerator * 2**-scale``.

Budgets, bids and interval cutoffs all live on dyadic grids, so they are
kept as integers with a power-of-two denominator instead of floats.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

_LITERAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:2\s*\^\s*(\d+)|(\d+)))?\s*$")


class NotDyadic(ValueError):
    """Raised when a value has a denominator that is not a power of two."""


def _normalize(num: int, scale: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    while scale > 0 and num % 2 == 0:
        num //= 2
        scale -= 1
    return num, scale


@total_ordering
class Dyadic:
    """An exact value ``numerator / 2**scale`` in canonical form."""

    __slots__ = ("numerator", "scale")

    def __init__(self, numerator: int, scale: int = 0):
        if scale < 0:
            numerator, scale = numerator * 2 ** (-scale), 0
        num, sc = _normalize(int(numerator), int(scale))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "scale", sc)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def coerce(cls, value) -> Dyadic:
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a budget")
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise NotDyadic(f"{value} is not dyadic")
            return cls(value.numerator, den.bit_length() - 1)
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, float):
            return cls.coerce(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    @classmethod
    def parse(cls, text: str) -> Dyadic:
        """Parse ``p``, ``p/2^k`` or ``p/q`` with ``q`` a power of two."""
        m = _LITERAL.match(text)
        if not m:
            raise ValueError(f"bad dyadic literal {text!r}")
        num = int(m.group(1))
        if m.group(2) is not None:
            return cls(num, int(m.group(2)))
        if m.group(3) is not None:
            return cls.coerce(Fraction(num, int(m.group(3))))
        return cls(num)

    def on_scale(self, scale: int) -> int:
        """Numerator of this value over ``2**scale`` (must be exact)."""
        if scale < self.scale:
            raise NotDyadic(f"{self} is finer than 2^-{scale}")
        return self.numerator << (scale - self.scale)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.scale)

    def _common(self, other):
        other = Dyadic.coerce(other)
        scale = max(self.scale, other.scale)
        return self.on_scale(scale), other.on_scale(scale), scale

    def __add__(self, other):
        a, b, s = self._common(other)
        return Dyadic(a + b, s)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, s = self._common(other)
        return Dyadic(a - b, s)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __neg__(self):
        return Dyadic(-self.numerator, self.scale)

    def __mul__(self, other):
        other = Dyadic.coerce(other)
        return Dyadic(self.numerator * other.numerator, self.scale + other.scale)

    __rmul__ = __mul__

    def half(self) -> Dyadic:
        return Dyadic(self.numerator, self.scale + 1)

    def __eq__(self, other):
        try:
            a, b, _ = self._common(other)
        except (TypeError, NotDyadic):
            return NotImplemented
        return a == b

    def __lt__(self, other):
        a, b, _ = self._common(other)
        return a < b

    def __hash__(self):
        return hash(self.to_fraction())

    def __repr__(self):
        return f"Dyadic({self.numerator}, {self.scale})"

    def __str__(self):
        if self.scale == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.scale}"

    def __float__(self):
        return self.numerator / (1 << self.scale)


ZERO = Dyadic(0)
ONE = Dyadic(1)
