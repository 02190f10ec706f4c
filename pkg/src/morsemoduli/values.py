"""Exact rational values and their string form."""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, str, Fraction, Decimal]


def parse_value(value: Rational) -> Fraction:
    """Parse an int, Fraction, Decimal or a decimal/rational string exactly.

    Floats are rejected: they would silently carry binary rounding error into
    sign decisions.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"expected an exact number or string, got {type(value).__name__}")


def format_value(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def sqrt_sum(radicands: Iterable[Fraction]) -> float:
    return math.fsum(math.sqrt(r) for r in radicands)
