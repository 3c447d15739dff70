from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction
from itertools import pairwise
import dataclasses
import math

from homeoact import _utils
from homeoact.actions.base import Knot, Lifted, Move, Path, crossings, periodic_levels
from homeoact.errors import OutOfRange
from homeoact.lamination import Gap, GapSet, SignAssignment
from homeoact.pl import CircleHomeo, IntervalHomeo


@dataclasses.dataclass(frozen=True)
class GluedAction(Move):
    """
    phi_{K, lambda}(f).

    On fibers r in K the product action (r, f(theta)). On a gap (r1, r2) with
    s = (r - r1) / (r2 - r1), the renormalized a_- (sign -1) or a_+ (sign +1):

        sign -1:  r1 + (r2 - r1) * (f~(theta) - f~(theta - s))
        sign +1:  r1 + (r2 - r1) * (f~(theta + s) - f~(theta))

    p is K = [0, 1]; a_- and a_+ are K = {0, 1} with the sign -1 and +1. With periodic
    set, r is read modulo 1: the torus obtained by gluing r = 0 to r = 1.
    """

    K: GapSet
    signs: SignAssignment
    f: CircleHomeo
    periodic: bool = False

    def __post_init__(self) -> None:
        self.signs.check(self.K)

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        n = math.floor(u) if self.periodic else 0
        r = u - n
        f = self.f
        angle = f.lift(v)
        gap = self.K.locate(r)

        if gap is None:
            return u, angle

        s = gap.chart(r)

        if self.signs[gap.index] < 0:
            return gap.unchart(angle - f.lift(v - s)) + n, angle

        return gap.unchart(f.lift(v + s) - angle) + n, angle

    def inverse(self) -> GluedAction:
        return GluedAction(self.K, self.signs, self.f.inverse(), self.periodic)

    def levels(self) -> Iterable[Fraction]:
        return self.K.thresholds

    def cuts(self, a: Knot, b: Knot) -> Iterable[Fraction]:
        thresholds = periodic_levels(a.u, b.u, self.K.thresholds) if self.periodic else self.K.thresholds
        radial = crossings(a.u, b.u, thresholds)
        bounds = [Fraction(0), *sorted(radial), Fraction(1)]
        cuts = list(radial)
        xs = self.f.breakpoints_x

        for p0, p1 in pairwise(bounds):
            k0, k1 = a.towards(b, p0), a.towards(b, p1)
            local = crossings(k0.v, k1.v, periodic_levels(k0.v, k1.v, xs))
            middle = (k0.u + k1.u) / 2
            n = math.floor(middle) if self.periodic else 0
            gap = self.K.locate(middle - n)

            if gap is not None:
                sign = self.signs[gap.index]
                w0, w1 = k0.v + sign * gap.chart(k0.u - n), k1.v + sign * gap.chart(k1.u - n)
                local.extend(crossings(w0, w1, periodic_levels(w0, w1, xs)))

            cuts.extend(p0 + (p1 - p0) * q for q in local)

        return cuts


@dataclasses.dataclass(frozen=True)
class DiagonalAction(Move):
    """a_T2(f): (x, y) -> (f(x), f(y))."""

    f: CircleHomeo

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        return self.f.lift(u), self.f.lift(v)

    def inverse(self) -> DiagonalAction:
        return DiagonalAction(self.f.inverse())

    def cuts(self, a: Knot, b: Knot) -> Iterable[Fraction]:
        xs = self.f.breakpoints_x
        return [
            *crossings(a.u, b.u, periodic_levels(a.u, b.u, xs)),
            *crossings(a.v, b.v, periodic_levels(a.v, b.v, xs)),
        ]


@dataclasses.dataclass(frozen=True)
class RadialMap(Move):
    """(r, theta) -> (h(r), theta) for a homeomorphism h of [0, 1]."""

    h: IntervalHomeo

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        return self.h(u), v

    def inverse(self) -> RadialMap:
        return RadialMap(self.h.inverse())

    def cuts(self, a: Knot, b: Knot) -> Iterable[Fraction]:
        return crossings(a.u, b.u, (x for x, _ in self.h.breakpoints))

    def levels(self) -> Iterable[Fraction]:
        return [c for point in self.h.breakpoints for c in point]


@dataclasses.dataclass(frozen=True)
class Twist(Move):
    """
    Identity off the gap cylinder, (r, theta) -> (r, theta + sign * s) on it.

    The lifted angle keeps the full turn past the gap (theta + sign beyond r2), which is
    the same point of the annulus and keeps lifted curves continuous.
    """

    gap: Gap
    sign: int = 1

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        s = min(max(self.gap.chart(u), Fraction(0)), Fraction(1))
        return u, v + self.sign * s

    def inverse(self) -> Twist:
        return Twist(self.gap, -self.sign)

    def cuts(self, a: Knot, b: Knot) -> Iterable[Fraction]:
        return crossings(a.u, b.u, (self.gap.lo, self.gap.hi))

    def levels(self) -> Iterable[Fraction]:
        return (self.gap.lo, self.gap.hi)


@dataclasses.dataclass(frozen=True)
class Shear(Move):
    """S(r, theta) = (r, theta + sign * r)."""

    sign: int = 1

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        return u, v + self.sign * u

    def inverse(self) -> Shear:
        return Shear(-self.sign)


@dataclasses.dataclass(frozen=True)
class DiagonalChart(Move):
    """h(r, theta) = (theta, theta - r), annulus to torus."""

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        return v, v - u

    def inverse(self) -> DiagonalChartInverse:
        return DiagonalChartInverse()


@dataclasses.dataclass(frozen=True)
class DiagonalChartInverse(Move):
    """(x, y) -> (x - y taken in [0, 1), x), torus to annulus; the diagonal lands on r = 0."""

    def apply(self, u: Fraction, v: Fraction) -> Lifted:
        return _utils.frac_part(u - v), u

    def inverse(self) -> DiagonalChart:
        return DiagonalChart()

    def push(self, path: Path) -> Path:
        """
        Curves are carried whole when x - y stays in one [n, n + 1]; a curve touching the
        diagonal from that side lands on r = 0 or r = 1 accordingly.
        """
        ws = [k.u - k.v for k in path]
        n = math.floor(min(ws))

        if max(ws) > n + 1:
            raise OutOfRange("the curve crosses the diagonal, where the torus is cut open")

        return tuple(Knot(k.t, w - n, k.u) for k, w in zip(path, ws, strict=True))


def twists(K: GapSet, flips: Iterable[tuple[int, int]]) -> tuple[Twist, ...]:
    """Twists on the given (gap index, direction) pairs."""
    return tuple(Twist(K.gap(index), sign) for index, sign in flips)
