"""
Moves are the primitive homeomorphisms a SurfaceMap is composed of.

A move acts on lifted coordinates (u, v): u is the radial coordinate r on the annulus
(or the first circle coordinate on the torus) and v is a real lift of the angle. Every
move is piecewise linear in (u, v) along any segment, so it can push a piecewise-linear
curve forward exactly: cut each segment where the formula changes piece, then evaluate
at the knots.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from fractions import Fraction
from itertools import pairwise
from typing import NamedTuple, TypeAlias
import abc
import math

Lifted: TypeAlias = tuple[Fraction, Fraction]


class Knot(NamedTuple):
    """Curve parameter t and the lifted point (u, v) it is sent to."""

    t: Fraction
    u: Fraction
    v: Fraction

    def towards(self, other: Knot, p: Fraction) -> Knot:
        """The point at relative position p on the segment self -> other."""
        return Knot(
            self.t + p * (other.t - self.t),
            self.u + p * (other.u - self.u),
            self.v + p * (other.v - self.v),
        )


Path: TypeAlias = tuple[Knot, ...]
"""Piecewise-linear curve: linear between consecutive knots, t strictly increasing."""


def segment(t0: Fraction, t1: Fraction, start: Lifted, end: Lifted) -> Path:
    return (Knot(t0, *start), Knot(t1, *end))


def crossings(q_a: Fraction, q_b: Fraction, levels: Iterable[Fraction]) -> list[Fraction]:
    """Relative positions p in (0, 1) where the linear q, from q_a to q_b, meets a level."""
    if q_a == q_b:
        return []

    lo, hi = min(q_a, q_b), max(q_a, q_b)
    return [(level - q_a) / (q_b - q_a) for level in levels if lo < level < hi]


def periodic_levels(q_a: Fraction, q_b: Fraction, base: Iterable[Fraction]) -> Iterator[Fraction]:
    """base + n for every integer n, restricted to a window around [q_a, q_b]."""
    base = tuple(base)

    for n in range(math.floor(min(q_a, q_b)) - 1, math.floor(max(q_a, q_b)) + 1):
        for x in base:
            yield x + n


def value_at(path: Path, t: Fraction) -> Knot:
    """Evaluate the curve at parameter t."""
    for a, b in pairwise(path):
        if a.t <= t <= b.t:
            return a if a.t == t else a.towards(b, (t - a.t) / (b.t - a.t))

    if len(path) == 1 and path[0].t == t:
        return path[0]

    raise ValueError(f"parameter {t} is outside the curve")


class Move(abc.ABC):
    """A homeomorphism given by an exact formula on lifted coordinates."""

    @abc.abstractmethod
    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        ...

    @abc.abstractmethod
    def inverse(self) -> Move:
        ...

    def cuts(self, a: Knot, b: Knot) -> Iterable[Fraction]:  # noqa: ARG002
        """Relative positions on the segment a -> b where the formula changes piece."""
        return ()

    def levels(self) -> Iterable[Fraction]:
        """Values of u across which the formula changes piece, whatever v is."""
        return ()

    def push(self, path: Path) -> Path:
        knots: list[Knot] = list(path[:1])

        for a, b in pairwise(path):
            knots.extend(a.towards(b, p) for p in sorted(set(self.cuts(a, b))) if 0 < p < 1)
            knots.append(b)

        return tuple(Knot(k.t, *self.apply(k.u, k.v)) for k in knots)
