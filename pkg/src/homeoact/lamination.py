from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from itertools import pairwise
from typing import Literal, NamedTuple, TypeAlias
import functools as ft

import pydantic

from homeoact.errors import BadIndex, SignMismatch
from homeoact.pl import IntervalHomeo
from homeoact.types import Model, Rational, Sign

BlockTag: TypeAlias = Literal["point", "interval"]
BlockPattern: TypeAlias = tuple[BlockTag, ...]
"""
Combinatorial shadow of a GapSet: whether each block, in order, is a single point.
Two GapSets are matched by an increasing (decreasing) homeomorphism of [0, 1] exactly
when their patterns agree (agree after reversal).
"""


class Gap(NamedTuple):
    """Open interval (lo, hi) of [0, 1] - K."""

    index: int
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def chart(self, r: Fraction) -> Fraction:
        """Position of r inside the gap, 0 at lo and 1 at hi."""
        return (r - self.lo) / self.length

    def unchart(self, s: Fraction) -> Fraction:
        return self.lo + s * self.length


class GapSet(Model):
    """Compact K in [0, 1] containing 0 and 1, as finitely many closed rational blocks."""

    blocks: tuple[tuple[Rational, Rational], ...]

    @pydantic.field_validator("blocks")
    @classmethod
    def _check_blocks(cls, blocks: tuple[tuple[Fraction, Fraction], ...]) -> tuple[tuple[Fraction, Fraction], ...]:
        if not blocks:
            raise ValueError("K needs at least one block")

        if blocks[0][0] != 0 or blocks[-1][1] != 1:
            raise ValueError("K must contain 0 and 1: first block starts at 0, last block ends at 1")

        for a, b in blocks:
            if a > b:
                raise ValueError(f"block [{a}, {b}] is empty")

        for (_, b), (a, _) in pairwise(blocks):
            if not b < a:
                raise ValueError(f"blocks must be sorted and disjoint with a non-empty gap, got {b} then {a}")

        return blocks

    @classmethod
    def from_blocks(cls, *blocks: tuple[Fraction | int | str, Fraction | int | str]) -> GapSet:
        return cls(blocks=blocks)  # type: ignore[arg-type]

    @classmethod
    def full(cls) -> GapSet:
        """K = [0, 1], the product action."""
        return cls.from_blocks((0, 1))

    @classmethod
    def boundary(cls) -> GapSet:
        """K = {0, 1}, a single gap."""
        return cls.from_blocks((0, 0), (1, 1))

    @ft.cached_property
    def gaps(self) -> tuple[Gap, ...]:
        return tuple(Gap(i, b, a) for i, ((_, b), (a, _)) in enumerate(pairwise(self.blocks)))

    @ft.cached_property
    def gap_starts(self) -> tuple[Fraction, ...]:
        return tuple(gap.lo for gap in self.gaps)

    @ft.cached_property
    def thresholds(self) -> tuple[Fraction, ...]:
        """Every block endpoint, sorted: where the glued formula may change."""
        return tuple(sorted({x for block in self.blocks for x in block}))

    @property
    def pattern(self) -> BlockPattern:
        return tuple("point" if a == b else "interval" for a, b in self.blocks)

    def gap(self, index: int) -> Gap:
        if not 0 <= index < len(self.gaps):
            raise BadIndex(f"gap index {index} out of range, K has {len(self.gaps)} gaps")

        return self.gaps[index]

    def locate(self, r: Fraction) -> Gap | None:
        """The gap containing r, or None when r belongs to K."""
        i = bisect_right(self.gap_starts, r) - 1

        if i >= 0 and self.gaps[i].lo < r < self.gaps[i].hi:
            return self.gaps[i]

        return None

    def __contains__(self, r: Fraction) -> bool:
        return 0 <= r <= 1 and self.locate(r) is None

    def image(self, h: IntervalHomeo) -> GapSet:
        """h(K) for a homeomorphism h of [0, 1]."""
        blocks = sorted(tuple(sorted((h(a), h(b)))) for a, b in self.blocks)
        return GapSet(blocks=tuple(blocks))  # type: ignore[arg-type]

    def __str__(self) -> str:
        return " U ".join(f"{{{a}}}" if a == b else f"[{a}, {b}]" for a, b in self.blocks)


class SignAssignment(Model):
    """lambda: one sign per gap of a GapSet."""

    signs: tuple[Sign, ...] = ()

    @classmethod
    def of(cls, *signs: int) -> SignAssignment:
        return cls(signs=signs)  # type: ignore[arg-type]

    @classmethod
    def constant(cls, K: GapSet, sign: int = -1) -> SignAssignment:
        return cls(signs=(sign,) * len(K.gaps))  # type: ignore[arg-type]

    def check(self, K: GapSet) -> None:
        if len(self.signs) != len(K.gaps):
            raise SignMismatch(f"lambda has {len(self.signs)} signs but K has {len(K.gaps)} gaps")

    def __getitem__(self, index: int) -> int:
        return self.signs[index]

    def __len__(self) -> int:
        return len(self.signs)

    def flipped(self, index: int) -> SignAssignment:
        signs = list(self.signs)
        signs[index] = -signs[index]
        return SignAssignment(signs=tuple(signs))

    def transported(self, orientation: Literal["increasing", "decreasing"]) -> SignAssignment:
        """lambda o h^-1 for an increasing matching, -lambda o h^-1 for a decreasing one."""
        if orientation == "increasing":
            return self

        return SignAssignment(signs=tuple(-s for s in reversed(self.signs)))

    def __str__(self) -> str:
        return "(" + ", ".join("+1" if s > 0 else "-1" for s in self.signs) + ")"
