"""
Recovering (K, lambda) from an action on the annulus, and the invariant circle data
from an action on the torus.

The stabilizer of an angle theta0 is sampled by bumps which fix an arc of radius rho
around it. The common fixed set of such a sample along the fiber theta = theta0 is K,
thickened into every gap by rho times the gap length: the gap formula fixes (r, theta0)
exactly while theta0 - s (or theta0 + s) stays inside the fixed arc. Component endpoints
are piecewise affine in rho, bending only at breakpoint levels of the maps, so fixed sets
for shrinking radii extrapolate to K once three of them line up with no level in between.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from fractions import Fraction
from itertools import pairwise
from typing import NamedTuple
import dataclasses
import logging

import pydantic

from homeoact import _utils, const
from homeoact.actions.base import Path
from homeoact.actions.models import quotient_chart
from homeoact.actions.surfaces import AnnulusPoint, Surface, SurfaceMap, SurfacePoint, fiber
from homeoact.config import Settings
from homeoact.documents import AnnulusConjugacyReport, RadialPoint, RecoveryReport
from homeoact.errors import EmptyFixedSet, GeneratorNotInStabilizer, Inconclusive, OutOfRange, ValidationFailure
from homeoact.lamination import GapSet, SignAssignment
from homeoact.pl import CircleHomeo, FixedIntervalSet, Interval, bump_family, stabilizer_bumps
from homeoact.recovery.oracles import ActionOracle

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class FixedFiberSet:
    """
    Fixed r-values on a fiber, as sorted disjoint closed intervals of [0, 1].

    width is zero when the set was solved exactly; otherwise every reported endpoint is
    within width of the true one, on the fixed side.
    """

    components: tuple[Interval, ...]
    width: Fraction = Fraction(0)

    @property
    def certified(self) -> bool:
        return self.width == 0

    def holds(self, r: Fraction) -> bool:
        return any(c.holds(r) for c in self.components)

    def __str__(self) -> str:
        return " U ".join(map(str, self.components)) or "{}"


@dataclasses.dataclass(frozen=True)
class _Fiber:
    """The fiber theta = theta0 carried into the oracle's surface, parametrised by r."""

    chart: SurfaceMap
    theta: Fraction

    def point(self, r: Fraction) -> SurfacePoint:
        return self.chart(AnnulusPoint(r, self.theta))

    @property
    def curve(self) -> Path:
        return self.chart.push(fiber(self.theta))


def _check_stabilizer(theta0: Fraction, generators: Sequence[CircleHomeo]) -> None:
    for g in generators:
        if not g.fixes_neighbourhood(theta0):
            raise GeneratorNotInStabilizer(f"{g} does not fix a neighbourhood of theta = {theta0}")


def _exact_fixed_set(maps: Sequence[SurfaceMap], along: _Fiber) -> FixedFiberSet:
    curve = along.curve
    common = FixedIntervalSet((Interval(Fraction(0), Fraction(1)),))

    for m in maps:
        common = common.intersect(m.fixed_along(curve))

    return FixedFiberSet(common.components)


def _boundary(is_fixed: Callable[[Fraction], bool], moved: Fraction, fixed: Fraction, tolerance: Fraction) -> Fraction:
    """Bisect between a moved and a fixed parameter; return the fixed end of the final bracket."""
    while abs(fixed - moved) > tolerance:
        middle = (moved + fixed) / 2

        if is_fixed(middle):
            fixed = middle
        else:
            moved = middle

    return fixed


def _sampled_fixed_set(
    oracle: ActionOracle, generators: Sequence[CircleHomeo], along: _Fiber, *, probe_grid: int, bisection_exponent: int,
) -> FixedFiberSet:
    tolerance = Fraction(1, 2 ** bisection_exponent)

    def is_fixed(r: Fraction) -> bool:
        point = along.point(r)
        return all(oracle.query(g, point) == point for g in generators)

    ts = [Fraction(i, probe_grid) for i in range(probe_grid + 1)]
    flags = [is_fixed(t) for t in ts]
    components: list[Interval] = []
    i = 0

    while i <= probe_grid:
        if not flags[i]:
            i += 1
            continue

        j = i

        while j < probe_grid and flags[j + 1]:
            j += 1

        lo = ts[i] if i == 0 else _boundary(is_fixed, ts[i - 1], ts[i], tolerance)
        hi = ts[j] if j == probe_grid else _boundary(is_fixed, ts[j + 1], ts[j], tolerance)
        components.append(Interval(lo, hi))
        i = j + 1

    log.debug(f"sampled {probe_grid + 1} fiber points, {len(components)} fixed runs")
    return FixedFiberSet(tuple(components), width=tolerance)


def fiber_fixed_set(
    oracle: ActionOracle,
    theta0: Fraction,
    generators: Sequence[CircleHomeo],
    *,
    chart: SurfaceMap | None = None,
    settings: Settings | None = None,
) -> FixedFiberSet:
    """
    Common fixed points of the generators' images along the fiber theta = theta0.

    Solved exactly when the oracle exposes its maps, otherwise sampled on a grid and
    refined by bisection, which misses fixed points isolated between two probes.
    """
    settings = settings or Settings()
    chart = chart or SurfaceMap.identity(oracle.surface)
    _check_stabilizer(theta0, generators)
    along = _Fiber(chart, _utils.frac_part(theta0))
    maps = [oracle.surface_map(g) for g in generators]

    if all(m is not None for m in maps):
        return _exact_fixed_set(maps, along)  # type: ignore[arg-type]

    return _sampled_fixed_set(
        oracle,
        generators,
        along,
        probe_grid=settings.probe_grid,
        bisection_exponent=settings.bisection_exponent,
    )


def _extrapolate(rho_a: Fraction, e_a: Fraction, rho_b: Fraction, e_b: Fraction) -> Fraction:
    """Value at rho = 0 of the line through (rho_a, e_a) and (rho_b, e_b)."""
    return e_b - rho_b * (e_a - e_b) / (rho_a - rho_b)


def _on_line(radii: Sequence[Fraction], values: Sequence[Fraction]) -> bool:
    rho_a, rho_b, e_a, e_b = radii[-2], radii[-1], values[-2], values[-1]
    slope = (e_a - e_b) / (rho_a - rho_b)
    return all(e == e_b + (rho - rho_b) * slope for rho, e in zip(radii, values, strict=True))


class _End(NamedTuple):
    """One component endpoint: its value carried to rho = 0, and its value at the widest radius."""

    limit: Fraction
    widest: Fraction
    on_line: bool


def _fit_ends(radii: Sequence[Fraction], fixed_sets: Sequence[FixedFiberSet]) -> list[tuple[_End, _End]] | None:
    """Every component endpoint extrapolated to rho = 0; None when the sets differ in shape."""
    counts = {len(s.components) for s in fixed_sets}

    if len(counts) != 1:
        return None

    ends = []

    for k in range(counts.pop()):
        pair = []

        for side in ("lo", "hi"):
            values = [getattr(s.components[k], side) for s in fixed_sets]
            limit = _extrapolate(radii[-2], values[-2], radii[-1], values[-1])
            pair.append(_End(limit, values[0], _on_line(radii, values)))

        ends.append((pair[0], pair[1]))

    return ends


def _settled(ends: Sequence[tuple[_End, _End]], levels: frozenset[Fraction]) -> bool:
    """
    Every endpoint is affine in rho down to 0.

    An endpoint is piecewise linear in rho and only bends where it meets a breakpoint level
    of the maps. A line through the samples which reaches rho = 0 without meeting one is
    the endpoint itself, and so is its limit.
    """
    for end in (e for pair in ends for e in pair):
        lo, hi = sorted((end.limit, end.widest))

        if not end.on_line or any(lo < level < hi for level in levels):
            return False

    return True


def _blocks(ends: Sequence[tuple[_End, _End]]) -> tuple[tuple[Fraction, Fraction], ...]:
    blocks = []

    for lo_end, hi_end in ends:
        lo, hi = (min(max(e.limit, Fraction(0)), Fraction(1)) for e in (lo_end, hi_end))
        blocks.append((lo, hi) if lo <= hi else ((lo + hi) / 2, (lo + hi) / 2))

    return tuple(blocks)


@dataclasses.dataclass(frozen=True)
class _Limit:
    blocks: tuple[tuple[Fraction, Fraction], ...]
    certified: bool
    width: Fraction


def _first_exponent(anchors: Sequence[Fraction]) -> int:
    """The first radius 2^-k whose arcs around distinct anchors stay apart."""
    points = sorted({_utils.frac_part(a) for a in anchors})
    k = const.FIRST_RADIUS_EXPONENT

    if len(points) < 2:
        return k

    apart = min(b - a for a, b in pairwise([*points, points[0] + 1]))

    while Fraction(2, 2 ** k) >= apart:
        k += 1

    return k


def _exposed_levels(oracle: ActionOracle, chart: SurfaceMap | None) -> frozenset[Fraction] | None:
    """Breakpoint levels of the maps behind the oracle, None for a black box."""
    shown = oracle.surface_map(CircleHomeo.identity())

    if shown is None:
        return None

    return shown.levels() | (chart.levels() if chart is not None else frozenset())


def _stabilizer_limit(
    oracle: ActionOracle,
    anchors: Sequence[Fraction],
    generator_budget: int,
    *,
    chart: SurfaceMap | None,
    settings: Settings,
) -> _Limit:
    """
    Fixed fiber set of the stabilizer of every anchor, carried to rho = 0.

    The fiber is the one through anchors[0]. Exact oracles keep halving rho past the budget
    until the last three radii settle; black boxes extrapolate from the budget's radii.
    """
    if generator_budget < 2:
        raise ValidationFailure(f"generator budget must be at least 2 to extrapolate, got {generator_budget}")

    theta0 = anchors[0]
    first = _first_exponent(anchors)
    radii = [Fraction(1, 2 ** k) for k in range(first, first + generator_budget)]

    def fixed_at(rho: Fraction) -> FixedFiberSet:
        bumps = stabilizer_bumps(anchors, rho, const.BUMPS_PER_RADIUS)
        fixed = fiber_fixed_set(oracle, theta0, bumps, chart=chart, settings=settings)
        log.debug(f"radius {rho}: fixed fiber set {fixed}")
        return fixed

    fixed_sets = [fixed_at(rho) for rho in radii]

    if all(not s.components for s in fixed_sets):
        raise EmptyFixedSet(f"nothing on the fiber theta = {theta0} is fixed by the stabilizer sample")

    levels = _exposed_levels(oracle, chart)

    if levels is None:
        ends = _fit_ends(radii, fixed_sets)

        if ends is None:
            counts = sorted({len(s.components) for s in fixed_sets})
            raise Inconclusive(f"the fixed fiber set changes shape as the radius shrinks: {counts} components")

        width = max(s.width for s in fixed_sets) * (radii[-2] + radii[-1]) / (radii[-2] - radii[-1])
        return _Limit(_blocks(ends), certified=False, width=width)

    while True:
        if len(radii) >= 3:
            ends = _fit_ends(radii[-3:], fixed_sets[-3:])

            if ends is not None and _settled(ends, levels):
                return _Limit(_blocks(ends), certified=True, width=Fraction(0))

        if radii[-1] <= Fraction(1, 2 ** const.LAST_RADIUS_EXPONENT):
            raise Inconclusive(f"fixed fiber set endpoints are still bending at radius {radii[-1]}")

        radii.append(radii[-1] / 2)
        fixed_sets.append(fixed_at(radii[-1]))


def _recover_blocks(
    oracle: ActionOracle, theta0: Fraction, generator_budget: int, *, chart: SurfaceMap | None, settings: Settings,
) -> tuple[GapSet, _Limit]:
    limit = _stabilizer_limit(oracle, (_utils.frac_part(theta0),), generator_budget, chart=chart, settings=settings)

    try:
        K = GapSet(blocks=limit.blocks)  # type: ignore[arg-type]
    except pydantic.ValidationError as e:
        raise Inconclusive(f"recovered blocks {limit.blocks} do not form a lamination: {e.errors()[0]['msg']}") from None

    if not limit.certified:
        log.warning(f"K = {K} is not certified, endpoints are good to {limit.width}")

    return K, limit


def recover_gapset(
    oracle: ActionOracle,
    theta0: Fraction,
    generator_budget: int = 4,
    *,
    settings: Settings | None = None,
) -> GapSet:
    """K, read off the fixed fiber sets of bumps of radius 2^-2, 2^-3, ... fixing theta0."""
    K, _ = _recover_blocks(oracle, theta0, generator_budget, chart=None, settings=settings or Settings())
    return K


def _check_probe(f: CircleHomeo, theta: Fraction) -> None:
    if not f.fixes_neighbourhood(theta):
        raise GeneratorNotInStabilizer(f"{f} does not fix a neighbourhood of theta = {theta}")

    turns = f.lift(theta) - theta

    if any(f.lift(x) - x < turns for x in f.breakpoints_x):
        raise ValidationFailure(f"{f} dips below the identity, it cannot probe a sign")


def detect_sign(
    oracle: ActionOracle, K: GapSet, gap_index: int, theta0: Fraction, probe: CircleHomeo | None = None,
) -> int:
    """
    The sign of a gap, from the radial displacement of a map f >= id fixing a neighbourhood of theta0.

    phi(f) pushes the fiber theta0 outwards on a +1 gap and inwards on a -1 gap, whichever
    such f probes it. The default probe is a bump of radius 1/4.
    """
    if oracle.surface is not Surface.ANNULUS:
        raise ValidationFailure(f"signs are read on the annulus, not on the {oracle.surface}")

    gap = K.gap(gap_index)
    theta = _utils.frac_part(theta0)
    f = probe if probe is not None else bump_family(theta, const.SIGN_PROBE_RADIUS, 1)[0]
    _check_probe(f, theta)

    for r in (gap.lo, gap.hi):
        point = AnnulusPoint(r, theta)

        if oracle.query(f, point) != point:
            raise Inconclusive(f"gap {gap_index} endpoint r = {r} is moved, it does not bound a gap of K")

    for s in (const.SIGN_PROBE_MIDPOINT, *const.SIGN_PROBE_RETRIES):
        r = gap.unchart(s)
        image = oracle.query(f, AnnulusPoint(r, theta))

        if not isinstance(image, AnnulusPoint):
            raise Inconclusive(f"fiber point r = {r} left the annulus")

        if image.r != r:
            log.debug(f"gap {gap_index}: displacement {image.r - r} at r = {r}")
            return 1 if image.r > r else -1

    raise Inconclusive(f"gap {gap_index} is not displaced at any probe, the action is not a model on it")


def recover_signs(
    oracle: ActionOracle, K: GapSet, theta0: Fraction, probe: CircleHomeo | None = None,
) -> SignAssignment:
    return SignAssignment.of(*(detect_sign(oracle, K, gap.index, theta0, probe) for gap in K.gaps))


def recover_torus_circle(
    oracle: ActionOracle,
    theta0: Fraction,
    generator_budget: int = 4,
    *,
    chart: SurfaceMap | None = None,
    settings: Settings | None = None,
) -> GapSet:
    """
    The invariant circles of a torus action, as a GapSet on the annulus cut along them.

    chart carries the annulus into the torus; the gluing r = 0 ~ r = 1 by default, the
    diagonal chart for the coordinatewise action.
    """
    return recover_torus(oracle, theta0, generator_budget, chart=chart, settings=settings).gapset()


def recover_annulus(
    oracle: ActionOracle,
    theta0: Fraction = Fraction(0),
    generator_budget: int = 4,
    *,
    settings: Settings | None = None,
) -> RecoveryReport:
    """(K, lambda) of an annulus action, as a report document."""
    settings = settings or Settings()
    K, limit = _recover_blocks(oracle, theta0, generator_budget, chart=None, settings=settings)
    signs = recover_signs(oracle, K, theta0)
    log.info(f"recovered K = {K}, lambda = {signs}")

    return RecoveryReport(
        blocks=K.blocks,
        signs=signs.signs,
        certified=limit.certified,
        max_width=limit.width,
        anchor=theta0,
        generator_budget=generator_budget,
    )


def recover_annulus_conjugacy(
    oracle: ActionOracle,
    grid: Sequence[Fraction],
    theta0: Fraction = Fraction(0),
    generator_budget: int = 4,
    *,
    settings: Settings | None = None,
) -> AnnulusConjugacyReport:
    """
    The radial map g with oracle(f) = g o phi_{K, lambda}(f) o g^-1, on a grid of radii.

    K and lambda are recovered first. On K the map is not determined and is reported as
    the identity. Inside a gap with sign -1 the point at relative position s is the only
    point of the fiber theta0 fixed by every map fixing neighbourhoods of theta0 and
    theta0 - s (theta0 + s for sign +1); its position is found as the limit of shrinking
    stabilizer samples, like K. Only conjugacies which keep every fiber on itself are
    read off this way.
    """
    if not grid:
        raise ValidationFailure("the radial grid is empty")

    settings = settings or Settings()
    theta = _utils.frac_part(theta0)
    K, limit = _recover_blocks(oracle, theta, generator_budget, chart=None, settings=settings)
    signs = recover_signs(oracle, K, theta)
    certified, width = limit.certified, limit.width
    points = []

    for r in grid:
        if not 0 <= r <= 1:
            raise OutOfRange(f"radius {r} is outside [0, 1]")

        gap = K.locate(r)

        if gap is None:
            points.append(RadialPoint(r=r, value=r, width=limit.width))
            continue

        anchor = theta + signs[gap.index] * gap.chart(r)
        marked = _stabilizer_limit(oracle, (theta, anchor), generator_budget, chart=None, settings=settings)
        inside = [b for b in marked.blocks if gap.lo < b[0] and b[1] < gap.hi]

        if len(inside) != 1:
            raise Inconclusive(f"r = {r}: expected one marked point inside gap {gap.index}, found {inside}")

        ((lo, hi),) = inside

        if marked.certified and lo != hi:
            raise Inconclusive(f"r = {r}: the marked set [{lo}, {hi}] inside gap {gap.index} is not a point")

        point = RadialPoint(r=r, value=(lo + hi) / 2, width=max(marked.width, (hi - lo) / 2))
        log.debug(f"g({r}) = {point.value}")
        points.append(point)
        certified = certified and marked.certified
        width = max(width, point.width)

    log.info(f"recovered the radial conjugacy on {len(points)} radii, certified = {certified}")

    return AnnulusConjugacyReport(
        blocks=K.blocks,
        signs=signs.signs,
        points=tuple(points),
        certified=certified,
        max_width=width,
        anchor=theta,
    )


def recover_torus(
    oracle: ActionOracle,
    theta0: Fraction = Fraction(0),
    generator_budget: int = 4,
    *,
    chart: SurfaceMap | None = None,
    settings: Settings | None = None,
) -> RecoveryReport:
    """The invariant circle data of a torus action, as a report document without signs."""
    if oracle.surface is not Surface.TORUS:
        raise ValidationFailure(f"expected a torus oracle, got one on the {oracle.surface}")

    settings = settings or Settings()
    K, limit = _recover_blocks(oracle, theta0, generator_budget, chart=chart or quotient_chart(), settings=settings)
    log.info(f"recovered invariant circles K = {K} (0 ~ 1)")

    return RecoveryReport(
        blocks=K.blocks,
        certified=limit.certified,
        max_width=limit.width,
        anchor=theta0,
        generator_budget=generator_budget,
    )
