from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Literal, TypeAlias

import pydantic

from homeoact import _utils

Rational: TypeAlias = Annotated[
    Fraction,
    pydantic.BeforeValidator(_utils.parse_rational),
    pydantic.PlainSerializer(_utils.format_rational, return_type=str),
]
"""
An exact rational. Documents carry it as a "num/den" string; floats are refused so
that no value ever loses exactness on its way in.
"""

Sign: TypeAlias = Annotated[
    Literal[-1, 1],
    pydantic.BeforeValidator(_utils.parse_sign),
    pydantic.PlainSerializer(_utils.format_sign, return_type=str),
]
"""A gap sign, serialized as "+1" or "-1"."""

Orientation: TypeAlias = Literal["increasing", "decreasing"]

Pair: TypeAlias = tuple[Fraction, Fraction]


class Model(pydantic.BaseModel):
    """Immutable value object shared by every domain type."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)
