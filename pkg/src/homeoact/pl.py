"""
Exact piecewise-linear homeomorphisms of the circle, the line and the unit interval.

Every coordinate is a Fraction. Maps are immutable and every operation returns a new
map, so values can be shared freely between threads.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections.abc import Iterable, Sequence
from fractions import Fraction
from itertools import pairwise
from typing import Any, NamedTuple
import dataclasses
import logging
import math

from homeoact import _utils
from homeoact.errors import BadRadius, NonMonotone, OutOfRange, ValidationFailure
from homeoact.types import Pair

log = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _collinear(a: Pair, b: Pair, c: Pair) -> bool:
    return (b[1] - a[1]) * (c[0] - b[0]) == (c[1] - b[1]) * (b[0] - a[0])


def _read_points(breakpoints: Iterable[Sequence[Any]]) -> list[Pair]:
    return [(_utils.parse_rational(x), _utils.parse_rational(y)) for x, y in breakpoints]


class Interval(NamedTuple):
    """Closed interval, a None endpoint stands for -inf (lo) or +inf (hi)."""

    lo: Fraction | None
    hi: Fraction | None

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    @property
    def width(self) -> Fraction:
        if self.lo is None or self.hi is None:
            raise OutOfRange(f"unbounded interval {self} has no width")
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        if self.lo is None or self.hi is None:
            raise OutOfRange(f"unbounded interval {self} has no midpoint")
        return (self.lo + self.hi) / 2

    def holds(self, x: Fraction) -> bool:
        return (self.lo is None or self.lo <= x) and (self.hi is None or x <= self.hi)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"


def _lo_key(interval: Interval) -> tuple[int, Fraction]:
    return (0, ZERO) if interval.lo is None else (1, interval.lo)


def _ends_before(a: Fraction | None, b: Fraction | None) -> bool:
    """a < b for upper endpoints, None being +inf."""
    return a is not None and (b is None or a < b)


@dataclasses.dataclass(frozen=True)
class FixedIntervalSet:
    """Finite union of closed, pairwise disjoint, sorted intervals."""

    components: tuple[Interval, ...] = ()

    @classmethod
    def union(cls, intervals: Iterable[Interval]) -> FixedIntervalSet:
        """Normalize arbitrary closed intervals into sorted disjoint components."""
        merged: list[Interval] = []

        for interval in sorted(intervals, key=_lo_key):
            if merged and (merged[-1].hi is None or (interval.lo is not None and interval.lo <= merged[-1].hi)):
                last = merged.pop()
                hi = None if last.hi is None or interval.hi is None else max(last.hi, interval.hi)
                interval = Interval(last.lo, hi)

            merged.append(interval)

        return cls(tuple(merged))

    @classmethod
    def everything(cls) -> FixedIntervalSet:
        return cls((Interval(None, None),))

    def intersect(self, other: FixedIntervalSet) -> FixedIntervalSet:
        out: list[Interval] = []
        i = j = 0

        while i < len(self.components) and j < len(other.components):
            a, b = self.components[i], other.components[j]
            lo = b.lo if a.lo is None else a.lo if b.lo is None else max(a.lo, b.lo)
            hi = b.hi if a.hi is None else a.hi if b.hi is None else min(a.hi, b.hi)

            if lo is None or hi is None or lo <= hi:
                out.append(Interval(lo, hi))

            if _ends_before(a.hi, b.hi):
                i += 1
            else:
                j += 1

        return FixedIntervalSet(tuple(out))

    def clip(self, lo: Fraction, hi: Fraction) -> FixedIntervalSet:
        return self.intersect(FixedIntervalSet((Interval(lo, hi),)))

    def holds(self, x: Fraction) -> bool:
        return any(c.holds(x) for c in self.components)

    @property
    def bounded_components(self) -> tuple[Interval, ...]:
        return tuple(c for c in self.components if c.bounded)

    def __bool__(self) -> bool:
        return bool(self.components)

    def __str__(self) -> str:
        return " U ".join(map(str, self.components)) or "{}"


def solve_linear_piece(
    t_a: Fraction, t_b: Fraction, d_a: Fraction, d_b: Fraction, *, modular: bool = False,
) -> list[Interval]:
    """
    Parameters t in [t_a, t_b] where the linear function d vanishes.

    With modular=True, where d takes an integer value instead. d is given by its values
    at both ends of the piece.
    """
    if d_a == d_b:
        hit = d_a == 0 or (modular and d_a.denominator == 1)
        return [Interval(t_a, t_b)] if hit else []

    lo, hi = min(d_a, d_b), max(d_a, d_b)

    if modular:
        targets: Iterable[int] = _utils.integers_between(lo, hi)
    else:
        targets = (0,) if lo <= 0 <= hi else ()

    roots = (t_a + (k - d_a) / (d_b - d_a) * (t_b - t_a) for k in targets)
    return [Interval(t, t) for t in roots]


@dataclasses.dataclass(frozen=True)
class CircleHomeo:
    """
    Orientation-preserving PL homeomorphism f of S^1 = R/Z.

    Stored as the graph of its lift on [0, 1): breakpoints (x, f~(x)) with x[0] == 0 and
    f~(0) in [0, 1), no redundant breakpoint after x = 0. Between the last breakpoint and
    (1, f~(0) + 1) the lift is linear, and f~(x + n) = f~(x) + n for every integer n.
    The form is canonical, so two maps are equal exactly when their breakpoints are.
    """

    breakpoints: tuple[Pair, ...]
    _xs: tuple[Fraction, ...] = dataclasses.field(init=False, repr=False, compare=False)
    _slopes: tuple[Fraction, ...] = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        closed = (*self.breakpoints, (ONE, self.breakpoints[0][1] + 1))
        object.__setattr__(self, "_xs", tuple(x for x, _ in self.breakpoints))
        object.__setattr__(self, "_slopes", tuple((y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in pairwise(closed)))

    @classmethod
    def from_breakpoints(cls, breakpoints: Iterable[Sequence[Any]]) -> CircleHomeo:
        """Validate and normalize the PL circle map interpolating the given breakpoints."""
        points = _read_points(breakpoints)

        if not points:
            raise ValidationFailure("a circle map needs at least one breakpoint")

        for x, _ in points:
            if not ZERO <= x < ONE:
                raise OutOfRange(f"breakpoint abscissa {x} is outside [0, 1)")

        for (x0, y0), (x1, y1) in pairwise(points):
            if x1 <= x0:
                raise OutOfRange(f"breakpoint abscissae must strictly increase, got {x0} then {x1}")

            if y1 <= y0:
                raise NonMonotone(f"piece from x={x0} to x={x1} has slope <= 0")

        if points[-1][1] >= points[0][1] + 1:
            raise NonMonotone(f"wrap piece from x={points[-1][0]} to x={points[0][0] + 1} has slope <= 0")

        return cls._canonical(points)

    @classmethod
    def _canonical(cls, points: list[Pair]) -> CircleHomeo:
        """Normalize trusted points: strictly increasing x in [0, 1), increasing lift."""
        (x0, y0), (xn, yn) = points[0], points[-1]

        if x0 != 0:
            slope = (y0 - yn + 1) / (x0 - xn + 1)
            points = [(ZERO, yn - 1 + (1 - xn) * slope), *points]

        shift = math.floor(points[0][1])
        points = [(x, y - shift) for x, y in points]
        closed = [*points, (ONE, points[0][1] + 1)]
        kept = [closed[0]]

        for here, after in pairwise(closed[1:]):
            if not _collinear(kept[-1], here, after):
                kept.append(here)

        return cls(tuple(kept))

    @classmethod
    def identity(cls) -> CircleHomeo:
        return cls(((ZERO, ZERO),))

    @classmethod
    def rotation(cls, alpha: Fraction) -> CircleHomeo:
        """R_alpha, the lift x -> x + alpha."""
        return cls(((ZERO, _utils.frac_part(alpha)),))

    @property
    def breakpoints_x(self) -> tuple[Fraction, ...]:
        return self._xs

    @property
    def is_rotation(self) -> bool:
        return len(self.breakpoints) == 1

    def _piece(self, t: Fraction) -> int:
        return bisect_right(self._xs, t) - 1

    def lift(self, x: Fraction) -> Fraction:
        """f~(x) for the normalized lift."""
        n = math.floor(x)
        t = x - n
        i = self._piece(t)
        bx, by = self.breakpoints[i]
        return by + (t - bx) * self._slopes[i] + n

    def __call__(self, theta: Fraction) -> Fraction:
        return _utils.frac_part(self.lift(theta))

    def slope_right(self, x: Fraction) -> Fraction:
        return self._slopes[self._piece(_utils.frac_part(x))]

    def slope_left(self, x: Fraction) -> Fraction:
        t = _utils.frac_part(x)
        i = bisect_left(self._xs, t) - 1
        return self._slopes[i]

    def compose(self, other: CircleHomeo) -> CircleHomeo:
        """self o other."""
        if other.is_rotation and self.is_rotation:
            return CircleHomeo.rotation(self.breakpoints[0][1] + other.breakpoints[0][1])

        pullback = other.inverse()
        xs = set(other._xs)
        xs.update(_utils.frac_part(pullback.lift(x)) for x in self._xs)
        return CircleHomeo._canonical([(x, self.lift(other.lift(x))) for x in sorted(xs)])

    def __matmul__(self, other: CircleHomeo) -> CircleHomeo:
        return self.compose(other)

    def inverse(self) -> CircleHomeo:
        """Reflect the graph: every (x, y) becomes (y, x), reduced to an abscissa in [0, 1)."""
        points = sorted((y - math.floor(y), x - math.floor(y)) for x, y in self.breakpoints)
        return CircleHomeo._canonical(points)

    def fixed_set(self) -> FixedIntervalSet:
        """Exact fixed points of f, as a subset of the fundamental domain [0, 1]."""
        closed = (*self.breakpoints, (ONE, self.breakpoints[0][1] + 1))
        pieces: list[Interval] = []

        for (x0, y0), (x1, y1) in pairwise(closed):
            pieces.extend(solve_linear_piece(x0, x1, y0 - x0, y1 - x1, modular=True))

        return FixedIntervalSet.union(pieces)

    def fixes_neighbourhood(self, theta: Fraction) -> bool:
        """True when f is the identity on an open arc around theta."""
        return (self.lift(theta) - theta).denominator == 1 and self.slope_left(theta) == self.slope_right(theta) == 1

    def __str__(self) -> str:
        points = ", ".join(f"({x}, {y})" for x, y in self.breakpoints)
        return f"CircleHomeo[{points}]"


def _van_der_corput(k: int) -> Fraction:
    """1/2, 1/4, 3/4, 1/8, 3/8, ... : dyadic positions, each new one halving a gap."""
    level = (k + 1).bit_length() - 1
    index = k + 1 - (1 << level)
    return Fraction(2 * index + 1, 1 << (level + 1))


def bump_family(center: Fraction, radius: Fraction, count: int) -> list[CircleHomeo]:
    """
    `count` tent maps which fix the arc (center - radius, center + radius) pointwise.

    In the chart u = theta - center, member k is the identity outside [radius, 1 - radius]
    and a tent above the diagonal inside, peaking at a dyadic position of the support.
    Each member is strictly above the diagonal on the whole open support, so the
    common fixed set is exactly the closed arc.
    """
    if not ZERO < radius < HALF:
        raise BadRadius(f"bump radius must lie in (0, 1/2), got {radius}")

    if count < 1:
        raise ValidationFailure(f"bump count must be positive, got {count}")

    length = 1 - 2 * radius
    bumps = []

    for k in range(count):
        p = _van_der_corput(k)
        peak = radius + length * p
        lift = [
            (center + radius, center + radius),
            (center + peak, center + peak + length * min(p, 1 - p) / 2),
            (center + 1 - radius, center + 1 - radius),
        ]
        points = sorted((x - math.floor(x), y - math.floor(x)) for x, y in lift)
        bumps.append(CircleHomeo._canonical(points))

    return bumps


def stabilizer_bumps(centers: Sequence[Fraction], radius: Fraction, count: int) -> list[CircleHomeo]:
    """
    `count` maps which fix the arc of `radius` around every center pointwise.

    Each member carries a tent above the diagonal on every complementary arc, so the
    common fixed set is exactly the union of the closed arcs. Overlapping arcs merge.
    """
    if not ZERO < radius < HALF:
        raise BadRadius(f"bump radius must lie in (0, 1/2), got {radius}")

    if count < 1:
        raise ValidationFailure(f"bump count must be positive, got {count}")

    if not centers:
        raise ValidationFailure("a stabilizer sample needs at least one center")

    starts = sorted({_utils.frac_part(c) for c in centers})
    ends = [*starts[1:], starts[0] + 1]
    free = [(a + radius, b - radius) for a, b in zip(starts, ends, strict=True) if b - a > 2 * radius]
    bumps = []

    for k in range(count):
        p = _van_der_corput(k)
        lift = []

        for lo, hi in free:
            length = hi - lo
            lift += [(lo, lo), (lo + length * p, lo + length * p + length * min(p, 1 - p) / 2), (hi, hi)]

        if not lift:
            bumps.append(CircleHomeo.identity())
            continue

        points = sorted({(x - math.floor(x), y - math.floor(x)) for x, y in lift})
        bumps.append(CircleHomeo._canonical(points))

    return bumps


@dataclasses.dataclass(frozen=True)
class LineHomeo:
    """Compactly supported increasing PL homeomorphism of R; identity outside its breakpoints."""

    breakpoints: tuple[Pair, ...] = ()
    _xs: tuple[Fraction, ...] = dataclasses.field(init=False, repr=False, compare=False)
    _ys: tuple[Fraction, ...] = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_xs", tuple(x for x, _ in self.breakpoints))
        object.__setattr__(self, "_ys", tuple(y for _, y in self.breakpoints))

    @classmethod
    def from_breakpoints(cls, breakpoints: Iterable[Sequence[Any]]) -> LineHomeo:
        points = _read_points(breakpoints)

        for (x0, y0), (x1, y1) in pairwise(points):
            if x1 <= x0:
                raise OutOfRange(f"breakpoint abscissae must strictly increase, got {x0} then {x1}")

            if y1 <= y0:
                raise NonMonotone(f"piece from x={x0} to x={x1} has slope <= 0")

        if points and (points[0][0] != points[0][1] or points[-1][0] != points[-1][1]):
            raise OutOfRange("first and last breakpoints of a compactly supported map lie on the diagonal")

        return cls._canonical(points)

    @classmethod
    def _canonical(cls, points: list[Pair]) -> LineHomeo:
        """Drop collinear breakpoints, then identity pieces at both ends."""
        kept = points[:1]

        for here, after in pairwise(points[1:]):
            if not _collinear(kept[-1], here, after):
                kept.append(here)

        kept.extend(points[-1:] if len(points) > 1 else [])

        def on_diagonal(i: int) -> bool:
            return kept[i][0] == kept[i][1]

        while len(kept) >= 2 and on_diagonal(0) and on_diagonal(1):
            kept.pop(0)

        while len(kept) >= 2 and on_diagonal(-1) and on_diagonal(-2):
            kept.pop()

        return cls(tuple(kept) if len(kept) > 1 else ())

    @classmethod
    def identity(cls) -> LineHomeo:
        return cls(())

    @classmethod
    def tent(cls, lo: Fraction, hi: Fraction, peak: Fraction = HALF) -> LineHomeo:
        """Bump supported on [lo, hi], strictly above the diagonal inside it."""
        if not lo < hi or not ZERO < peak < ONE:
            raise OutOfRange(f"cannot build a tent on [{lo}, {hi}] peaking at {peak}")

        top = lo + (hi - lo) * peak
        lift = (hi - lo) * min(peak, 1 - peak) / 2
        return cls(((lo, lo), (top, top + lift), (hi, hi)))

    def __call__(self, x: Fraction) -> Fraction:
        return self._interpolate(self._xs, self._ys, x)

    @staticmethod
    def _interpolate(xs: tuple[Fraction, ...], ys: tuple[Fraction, ...], x: Fraction) -> Fraction:
        if not xs or x <= xs[0] or x >= xs[-1]:
            return x

        i = bisect_right(xs, x) - 1
        return ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])

    def inverse(self) -> LineHomeo:
        return LineHomeo(tuple((y, x) for x, y in self.breakpoints))

    def inverse_at(self, y: Fraction) -> Fraction:
        return self._interpolate(self._ys, self._xs, y)

    def compose(self, other: LineHomeo) -> LineHomeo:
        """self o other."""
        xs = set(other._xs)
        xs.update(other.inverse_at(x) for x in self._xs)
        return LineHomeo._canonical([(x, self(other(x))) for x in sorted(xs)])

    def __matmul__(self, other: LineHomeo) -> LineHomeo:
        return self.compose(other)

    def fixed_set(self) -> FixedIntervalSet:
        """Exact set {x : f(x) = x}, solved piece by piece."""
        if not self.breakpoints:
            return FixedIntervalSet.everything()

        (first, _), (last, _) = self.breakpoints[0], self.breakpoints[-1]
        pieces = [Interval(None, first), Interval(last, None)]

        for (x0, y0), (x1, y1) in pairwise(self.breakpoints):
            pieces.extend(solve_linear_piece(x0, x1, y0 - x0, y1 - x1))

        return FixedIntervalSet.union(pieces)


def fixed_set(f: LineHomeo) -> FixedIntervalSet:
    return f.fixed_set()


@dataclasses.dataclass(frozen=True)
class IntervalHomeo:
    """PL homeomorphism of [0, 1], increasing or decreasing."""

    breakpoints: tuple[Pair, ...]
    _xs: tuple[Fraction, ...] = dataclasses.field(init=False, repr=False, compare=False)
    _ys: tuple[Fraction, ...] = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_xs", tuple(x for x, _ in self.breakpoints))
        object.__setattr__(self, "_ys", tuple(y for _, y in self.breakpoints))

    @classmethod
    def from_breakpoints(cls, breakpoints: Iterable[Sequence[Any]]) -> IntervalHomeo:
        points = _read_points(breakpoints)

        if len(points) < 2 or points[0][0] != 0 or points[-1][0] != 1:
            raise OutOfRange("an interval homeomorphism is given on [0, 1] from x=0 to x=1")

        if {points[0][1], points[-1][1]} != {ZERO, ONE}:
            raise OutOfRange("an interval homeomorphism maps {0, 1} onto {0, 1}")

        increasing = points[-1][1] == 1

        for (x0, y0), (x1, y1) in pairwise(points):
            if x1 <= x0:
                raise OutOfRange(f"breakpoint abscissae must strictly increase, got {x0} then {x1}")

            if (y1 <= y0) if increasing else (y1 >= y0):
                raise NonMonotone(f"piece from x={x0} to x={x1} breaks strict monotonicity")

        kept = points[:1]

        for here, after in pairwise(points[1:]):
            if not _collinear(kept[-1], here, after):
                kept.append(here)

        return cls((*kept, points[-1]))

    @classmethod
    def identity(cls) -> IntervalHomeo:
        return cls(((ZERO, ZERO), (ONE, ONE)))

    @classmethod
    def reflection(cls) -> IntervalHomeo:
        return cls(((ZERO, ONE), (ONE, ZERO)))

    @property
    def increasing(self) -> bool:
        return self.breakpoints[-1][1] == 1

    def __call__(self, x: Fraction) -> Fraction:
        if not ZERO <= x <= ONE:
            raise OutOfRange(f"{x} is outside [0, 1]")

        xs, ys = self._xs, self._ys
        i = min(bisect_right(xs, x) - 1, len(xs) - 2)
        return ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])

    def inverse(self) -> IntervalHomeo:
        points = sorted((y, x) for x, y in self.breakpoints)
        return IntervalHomeo(tuple(points))
