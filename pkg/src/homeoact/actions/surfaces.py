from __future__ import annotations

from collections.abc import Callable, Iterable
from fractions import Fraction
from itertools import pairwise
from typing import NamedTuple, TypeAlias
import dataclasses
import enum
import logging

from homeoact import _utils
from homeoact.actions.base import Lifted, Move, Path, segment, value_at
from homeoact.errors import OutOfRange, ValidationFailure
from homeoact.pl import CircleHomeo, FixedIntervalSet, Interval, solve_linear_piece

log = logging.getLogger(__name__)


class AnnulusPoint(NamedTuple):
    """(r, theta) with r in [0, 1] and theta in [0, 1)."""

    r: Fraction
    theta: Fraction

    def __str__(self) -> str:
        return f"{self.r},{self.theta}"


class TorusPoint(NamedTuple):
    """(x, y), both in [0, 1)."""

    x: Fraction
    y: Fraction

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


class Pole(enum.StrEnum):
    """Collapsed boundary circles: the cone point of the disc, the poles of the sphere."""

    CONE = "cone"
    NORTH = "north"
    SOUTH = "south"


SurfacePoint: TypeAlias = AnnulusPoint | TorusPoint | Pole


class Surface(enum.StrEnum):
    ANNULUS = "annulus"
    TORUS = "torus"
    DISC = "disc"
    SPHERE = "sphere"

    @property
    def poles(self) -> frozenset[Pole]:
        if self is Surface.DISC:
            return frozenset({Pole.CONE})

        if self is Surface.SPHERE:
            return frozenset({Pole.NORTH, Pole.SOUTH})

        return frozenset()

    def enter(self, point: tuple[Fraction, Fraction]) -> Lifted:
        """Lifted coordinates of a point which is not a pole."""
        a, b = point

        if self is Surface.TORUS:
            return _utils.frac_part(a), _utils.frac_part(b)

        lo_open = self in (Surface.DISC, Surface.SPHERE)
        hi_open = self is Surface.SPHERE

        if a < 0 or a > 1 or (lo_open and a == 0) or (hi_open and a == 1):
            raise OutOfRange(f"r = {a} does not name a point of the {self}, collapsed circles are poles")

        return a, _utils.frac_part(b)

    def leave(self, u: Fraction, v: Fraction) -> SurfacePoint:
        """Canonical representative of lifted coordinates."""
        if self is Surface.TORUS:
            return TorusPoint(_utils.frac_part(u), _utils.frac_part(v))

        if self is Surface.DISC and u == 0:
            return Pole.CONE

        if self is Surface.SPHERE and u in (0, 1):
            return Pole.SOUTH if u == 0 else Pole.NORTH

        return AnnulusPoint(u, _utils.frac_part(v))


@dataclasses.dataclass(frozen=True)
class SurfaceMap:
    """
    A homeomorphism given as a composition of moves, applied first to last.

    The inverse is the reversed list of inverse moves, so evaluating a map and then its
    inverse gives the input back exactly. Poles are fixed by every self-map of the disc
    and the sphere.
    """

    source: Surface
    target: Surface
    moves: tuple[Move, ...] = ()

    @classmethod
    def identity(cls, surface: Surface) -> SurfaceMap:
        return cls(surface, surface)

    def __call__(self, point: SurfacePoint | tuple[Fraction, Fraction]) -> SurfacePoint:
        if isinstance(point, Pole):
            if point not in self.source.poles or self.source != self.target:
                raise OutOfRange(f"{point} is not a point of the {self.source}")

            return point

        u, v = self.source.enter(point)

        for move in self.moves:
            u, v = move.apply(u, v)

        return self.target.leave(u, v)

    def compose(self, other: SurfaceMap) -> SurfaceMap:
        """self o other."""
        if other.target != self.source:
            raise ValidationFailure(f"cannot compose a map into the {other.target} with a map from the {self.source}")

        return SurfaceMap(other.source, self.target, (*other.moves, *self.moves))

    def __matmul__(self, other: SurfaceMap) -> SurfaceMap:
        return self.compose(other)

    def inverse(self) -> SurfaceMap:
        return SurfaceMap(self.target, self.source, tuple(move.inverse() for move in reversed(self.moves)))

    def conjugate(self, g: SurfaceMap) -> SurfaceMap:
        """g o self o g^-1."""
        return g @ self @ g.inverse()

    def levels(self) -> frozenset[Fraction]:
        """Radial values where some move changes piece."""
        return frozenset(level for move in self.moves for level in move.levels())

    def push(self, curve: Path) -> Path:
        """Exact image of a piecewise-linear curve given in lifted coordinates."""
        for move in self.moves:
            curve = move.push(curve)

        return curve

    def fixed_along(self, curve: Path) -> FixedIntervalSet:
        """
        Parameters t where the curve point is fixed, computed exactly.

        The image curve is linear between consecutive knots, and so is the source curve,
        so on each piece both coordinate differences are linear in t. The radial difference
        must vanish (be an integer on the torus), the angular one must be an integer.
        """
        if self.source != self.target:
            raise ValidationFailure("fixed points only make sense for a self-map")

        modular = self.target is Surface.TORUS
        image = self.push(curve)
        pieces: list[Interval] = []

        for a, b in pairwise(image):
            pa, pb = value_at(curve, a.t), value_at(curve, b.t)
            radial = solve_linear_piece(a.t, b.t, a.u - pa.u, b.u - pb.u, modular=modular)

            if not radial:
                continue

            angular = solve_linear_piece(a.t, b.t, a.v - pa.v, b.v - pb.v, modular=True)
            both = FixedIntervalSet.union(radial).intersect(FixedIntervalSet.union(angular))
            pieces.extend(both.components)

        return FixedIntervalSet.union(pieces)


ActionFamily: TypeAlias = Callable[[CircleHomeo], SurfaceMap]
"""A model action: the map of the surface attached to each circle homeomorphism."""


def fiber(theta: Fraction) -> Path:
    """The radial segment {(r, theta) : r in [0, 1]}, parametrised by r."""
    return segment(Fraction(0), Fraction(1), (Fraction(0), theta), (Fraction(1), theta))


def maps_agree(left: SurfaceMap, right: SurfaceMap, points: Iterable[SurfacePoint]) -> bool:
    """True when both maps send every sample point to the same point."""
    for point in points:
        if left(point) != right(point):
            log.debug(f"maps disagree at {point}: {left(point)} vs {right(point)}")
            return False

    return True
