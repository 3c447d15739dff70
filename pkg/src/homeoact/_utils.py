from __future__ import annotations

from fractions import Fraction
from typing import Any
import math

from homeoact.errors import ParseFailure


def parse_rational(value: Any) -> Fraction:
    """Read an exact rational from a document value."""
    if isinstance(value, Fraction):
        return value

    if isinstance(value, bool) or isinstance(value, float):
        raise ParseFailure(f"refusing inexact value {value!r}, write rationals as 'num/den' strings")

    if isinstance(value, int):
        return Fraction(value)

    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseFailure(f"'{value}' is not a rational") from None

    raise ParseFailure(f"cannot read a rational from {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_sign(value: Any) -> int:
    sign = parse_rational(value)

    if sign not in (-1, 1):
        raise ParseFailure(f"sign must be '+1' or '-1', got '{value}'")

    return int(sign)


def format_sign(value: int) -> str:
    return "+1" if value > 0 else "-1"


def frac_part(x: Fraction) -> Fraction:
    """The representative of x modulo 1 in [0, 1)."""
    return x - math.floor(x)


def integers_between(lo: Fraction, hi: Fraction) -> range:
    """Integers n with lo <= n <= hi."""
    return range(math.ceil(lo), math.floor(hi) + 1)
