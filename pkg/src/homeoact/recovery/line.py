"""
Recovering h from an action of the compactly supported line homeomorphisms which is
conjugate to the inclusion, psi(f) = h o f o h^-1.

Around a grid point x, a tent on the left of x - eps and a tent on the right of x + eps
have images whose common fixed set has exactly one bounded component, h([x - eps, x + eps]).
Shrinking eps squeezes that component onto h(x).
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from fractions import Fraction
from itertools import pairwise
from typing import NamedTuple
import logging

from homeoact import const
from homeoact.config import Settings
from homeoact.documents import LinePoint, LineRecoveryReport
from homeoact.errors import Inconclusive, NoShrink, RecoveryFailure, ValidationFailure
from homeoact.pl import FixedIntervalSet, Interval, LineHomeo
from homeoact.recovery.oracles import LineActionOracle

log = logging.getLogger(__name__)


class LineEstimate(NamedTuple):
    """h(x) lies in every enclosure; value is reported with the width of the last one."""

    x: Fraction
    value: Fraction
    width: Fraction
    enclosures: tuple[Interval, ...]
    certified: bool


def _exact_enclosure(oracle: LineActionOracle, left: LineHomeo, right: LineHomeo) -> Interval | None:
    images = oracle.image(left), oracle.image(right)

    if images[0] is None or images[1] is None:
        return None

    common = images[0].fixed_set().intersect(images[1].fixed_set())
    bounded = common.bounded_components

    if len(bounded) != 1:
        raise RecoveryFailure(f"the probes share {len(bounded)} bounded fixed components, expected exactly one")

    return bounded[0]


def _bisect(pushed: Callable[[Fraction], bool], moved: Fraction, fixed: Fraction, tolerance: Fraction) -> Fraction:
    """Shrink a (moved, fixed) bracket below tolerance; return the moved end."""
    while abs(fixed - moved) > tolerance:
        middle = (moved + fixed) / 2

        if pushed(middle):
            moved = middle
        else:
            fixed = middle

    return moved


def _sampled_enclosure(
    oracle: LineActionOracle,
    left: LineHomeo,
    right: LineHomeo,
    window: Interval,
    *,
    probe_grid: int,
    tolerance: Fraction,
) -> Interval:
    """
    Both tents lie above the diagonal, so their images do too: psi(left) moves exactly the
    points below h(x - eps) in the window, psi(right) the points above h(x + eps).
    """
    assert window.lo is not None and window.hi is not None
    step = window.width / probe_grid
    ys = [window.lo + i * step for i in range(probe_grid + 1)]

    def pushed_by(f: LineHomeo) -> Callable[[Fraction], bool]:
        return lambda y: oracle.query(f, y) > y

    by_left, by_right = pushed_by(left), pushed_by(right)
    moved_left = [y for y in ys if by_left(y)]
    moved_right = [y for y in ys if by_right(y)]

    if not moved_left or not moved_right:
        raise Inconclusive(f"no probe in {window} is moved by the image of a tent")

    a_lo = _bisect(by_left, moved_left[-1], moved_left[-1] + step, tolerance)
    b_hi = _bisect(by_right, moved_right[0], moved_right[0] - step, tolerance)

    if not a_lo < b_hi:
        raise RecoveryFailure(f"the moved regions of both probes overlap around [{a_lo}, {b_hi}]")

    return Interval(a_lo, b_hi)


def _check_nothing_fixed(oracle: LineActionOracle, window: Interval, *, probe_grid: int) -> None:
    """Raise when some point of the window is fixed by the images of tents covering it."""
    assert window.lo is not None and window.hi is not None
    width = window.width
    tents = [LineHomeo.tent(window.lo - k * width, window.hi + k * width) for k in (0, 1, 4)]
    images = [oracle.image(f) for f in tents]

    if all(image is not None for image in images):
        common = FixedIntervalSet.everything()

        for image in images:
            common = common.intersect(image.fixed_set())  # type: ignore[union-attr]

        fixed = common.clip(window.lo, window.hi)

        if fixed:
            raise RecoveryFailure(f"{fixed} is fixed by the whole action, it is not conjugate to the inclusion")

        return

    step = width / probe_grid

    for y in (window.lo + i * step for i in range(probe_grid + 1)):
        if all(oracle.query(f, y) == y for f in tents):
            raise RecoveryFailure(f"{y} is fixed by every sampled map, the action is not conjugate to the inclusion")


def _estimate(
    oracle: LineActionOracle,
    x: Fraction,
    schedule: Sequence[Fraction],
    window: Interval,
    *,
    probe_grid: int,
    tolerance: Fraction,
) -> LineEstimate:
    assert window.lo is not None and window.hi is not None
    enclosures: list[Interval] = []
    exact = True

    for eps in schedule:
        left = LineHomeo.tent(window.lo, x - eps)
        right = LineHomeo.tent(x + eps, window.hi)
        enclosure = _exact_enclosure(oracle, left, right)

        if enclosure is None:
            exact = False
            enclosure = _sampled_enclosure(oracle, left, right, window, probe_grid=probe_grid, tolerance=tolerance)

        if enclosures and not (enclosure.width < enclosures[-1].width):
            raise NoShrink(f"enclosure of h({x}) stalls at width {enclosure.width} for eps = {eps}")

        enclosures.append(enclosure)

    last = enclosures[-1]
    value = last.midpoint

    if exact and len(enclosures) >= 2:
        # enclosure ends are h(x -+ eps), affine in eps once eps is inside the pieces around x
        (rho_a, a), (rho_b, b) = zip(schedule[-2:], enclosures[-2:], strict=True)
        lo = b.lo - rho_b * (a.lo - b.lo) / (rho_a - rho_b)  # type: ignore[operator]
        hi = b.hi - rho_b * (a.hi - b.hi) / (rho_a - rho_b)  # type: ignore[operator]

        if lo == hi and last.holds(lo):
            value = lo

    return LineEstimate(x, value, last.width, tuple(enclosures), exact)


def recover_line_conjugacy(
    oracle: LineActionOracle,
    grid: Sequence[Fraction],
    shrink_schedule: Sequence[Fraction] = const.LINE_SHRINK_SCHEDULE,
    *,
    settings: Settings | None = None,
) -> list[LineEstimate]:
    """h(x) for every grid point, with nested enclosures along the shrink schedule."""
    settings = settings or Settings()

    if not grid or not shrink_schedule:
        raise ValidationFailure("line recovery needs a non-empty grid and shrink schedule")

    if any(b >= a for a, b in pairwise(shrink_schedule)) or shrink_schedule[-1] <= 0:
        raise ValidationFailure("the shrink schedule must be positive and strictly decreasing")

    if shrink_schedule[0] >= const.LINE_WINDOW_MARGIN:
        raise ValidationFailure(f"radii must stay below the window margin {const.LINE_WINDOW_MARGIN}")

    xs = sorted(grid)
    window = Interval(xs[0] - const.LINE_WINDOW_MARGIN, xs[-1] + const.LINE_WINDOW_MARGIN)
    tolerance = Fraction(1, 2 ** const.LINE_BISECTION_EXPONENT)
    _check_nothing_fixed(oracle, window, probe_grid=settings.probe_grid)
    estimates = [
        _estimate(oracle, x, shrink_schedule, window, probe_grid=settings.probe_grid, tolerance=tolerance) for x in xs
    ]

    for a, b in pairwise(estimates):
        if not a.value < b.value:
            raise RecoveryFailure(f"recovered h is not increasing: h({a.x}) = {a.value}, h({b.x}) = {b.value}")

    log.info(f"recovered h at {len(xs)} points, widest enclosure {max(e.width for e in estimates)}")
    return estimates


def line_report(estimates: Sequence[LineEstimate]) -> LineRecoveryReport:
    return LineRecoveryReport(
        points=tuple(LinePoint(x=e.x, value=e.value, width=e.width) for e in estimates),
        certified=all(e.certified for e in estimates),
        max_width=max(e.width for e in estimates),
    )
