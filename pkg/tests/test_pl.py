from __future__ import annotations

from fractions import Fraction as Q

from hypothesis import given, strategies as st
import pytest

from homeoact.errors import BadRadius, NonMonotone, OutOfRange, ParseFailure, ValidationFailure
from homeoact.pl import (
    CircleHomeo,
    FixedIntervalSet,
    Interval,
    IntervalHomeo,
    LineHomeo,
    bump_family,
    stabilizer_bumps,
)

from .strategies import circle_maps, rationals


def test_from_breakpoints_normalizes(f_half):
    assert f_half.breakpoints == ((0, 0), (Q(1, 2), Q(1, 4)))
    assert f_half.slope_right(0) == Q(1, 2)
    assert f_half.slope_right(Q(3, 4)) == Q(3, 2)


def test_from_breakpoints_adds_the_origin():
    f = CircleHomeo.from_breakpoints([("1/4", "1/2"), ("3/4", "3/4")])

    assert f.breakpoints[0][0] == 0
    assert f(Q(1, 4)) == Q(1, 2)
    assert f(Q(3, 4)) == Q(3, 4)


@pytest.mark.parametrize(
    "breakpoints, error",
    [
        ([(0, 0), ("1/2", "-1/4")], NonMonotone),
        ([(0, 0), ("1/2", "1/2"), ("3/4", "1/2")], NonMonotone),
        ([(0, 0), ("1/2", "5/4")], NonMonotone),
        ([(0, 0), ("3/2", "1/2")], OutOfRange),
        ([("1/2", 0), ("1/4", "1/2")], OutOfRange),
    ],
)
def test_from_breakpoints_rejects(breakpoints, error):
    with pytest.raises(error):
        CircleHomeo.from_breakpoints(breakpoints)


def test_from_breakpoints_refuses_floats():
    with pytest.raises(ParseFailure):
        CircleHomeo.from_breakpoints([(0, 0), (0.5, 0.25)])


def test_eval(f_half):
    assert f_half(Q(1, 4)) == Q(1, 8)
    assert f_half(Q(3, 4)) == Q(5, 8)
    assert f_half(Q(7, 4)) == Q(5, 8)


def test_eval_lift(f_half):
    assert f_half.lift(Q(3, 4)) == Q(5, 8)
    assert f_half.lift(Q(-1, 4)) == Q(-3, 8)
    assert f_half.lift(Q(5, 4)) == Q(9, 8)


def test_rotation_inverse_and_compose():
    r = CircleHomeo.rotation(Q(1, 3))

    assert r.inverse() == CircleHomeo.rotation(Q(2, 3))
    assert r @ r @ r == CircleHomeo.identity()
    assert CircleHomeo.rotation(Q(1, 2)) @ CircleHomeo.rotation(Q(1, 2)) == CircleHomeo.identity()


def test_inverse_example(f_half):
    assert f_half.inverse().breakpoints == ((0, 0), (Q(1, 4), Q(1, 2)))


def test_compose_example(f_half):
    g = f_half @ CircleHomeo.rotation(Q(1, 2))

    assert g(0) == Q(1, 4)
    assert g(Q(1, 2)) == 0
    assert g.lift(0) == Q(1, 4)


@given(circle_maps(), circle_maps(), circle_maps(), rationals(64))
def test_compose_is_associative(f, g, h, x):
    assert ((f @ g) @ h)(x) == (f @ (g @ h))(x) == f(g(h(x)))
    assert (f @ g) @ h == f @ (g @ h)


@given(circle_maps(), rationals(64, -2, 2))
def test_inverse_undoes(f, x):
    assert (f @ f.inverse()) == CircleHomeo.identity()
    assert f.inverse().lift(f.lift(x)) == x


@given(circle_maps(), rationals(64, -2, 2), st.integers(-3, 3))
def test_lift_commutes_with_deck_translations(f, x, n):
    assert f.lift(x + n) == f.lift(x) + n
    assert 0 <= f.lift(0) < 1


@given(circle_maps(), rationals(64, -2, 2), rationals(64, -2, 2))
def test_lift_is_increasing(f, x, y):
    if x < y:
        assert f.lift(x) < f.lift(y)


@given(circle_maps())
def test_canonical_form_is_stable(f):
    assert CircleHomeo.from_breakpoints(f.breakpoints) == f


@given(circle_maps(), rationals(64))
def test_fixed_set_is_exact_on_a_grid(f, x):
    fixed = f.fixed_set()

    for c in fixed.components:
        assert f(c.lo) == c.lo % 1
        assert f(c.midpoint) == c.midpoint % 1

    assert fixed.holds(x) == (f(x) == x % 1)


def test_circle_fixed_set_of_a_bump():
    (f,) = bump_family(Q(0), Q(1, 4), 1)

    assert f.fixed_set() == FixedIntervalSet((Interval(Q(0), Q(1, 4)), Interval(Q(3, 4), Q(1))))


def test_line_fixed_set_identity():
    assert LineHomeo.identity().fixed_set() == FixedIntervalSet.everything()


def test_line_fixed_set_bump():
    f = LineHomeo.from_breakpoints([(0, 0), ("1/2", "3/4"), (1, 1)])

    assert f.fixed_set() == FixedIntervalSet((Interval(None, Q(0)), Interval(Q(1), None)))
    assert f.fixed_set().bounded_components == ()


def test_line_fixed_set_with_an_interior_interval():
    f = LineHomeo.from_breakpoints(
        [(0, 0), ("1/8", "3/16"), ("1/4", "1/4"), ("1/2", "1/2"), ("3/4", "7/8"), (1, 1)],
    )

    assert f.fixed_set().components == (Interval(None, Q(0)), Interval(Q(1, 4), Q(1, 2)), Interval(Q(1), None))


def test_line_homeo_requires_compact_support():
    with pytest.raises(OutOfRange):
        LineHomeo.from_breakpoints([(0, "1/2"), (1, 1)])


def test_line_compose_and_inverse():
    h = LineHomeo.from_breakpoints([(0, 0), ("1/2", "1/4"), (1, 1)])
    tent = LineHomeo.tent(Q(0), Q(1, 2))

    assert (h @ h.inverse()) == LineHomeo.identity()
    assert (h @ tent @ h.inverse())(Q(1, 8)) == h(tent(h.inverse_at(Q(1, 8))))
    assert h.inverse_at(Q(1, 4)) == Q(1, 2)


def test_interval_homeo_reflection():
    T = IntervalHomeo.reflection()

    assert not T.increasing
    assert T(Q(1, 3)) == Q(2, 3)
    assert T.inverse() == T


def test_interval_homeo_rejects_non_monotone():
    with pytest.raises(NonMonotone):
        IntervalHomeo.from_breakpoints([(0, 0), ("1/2", "3/4"), ("3/4", "1/2"), (1, 1)])


def test_interval_set_algebra():
    a = FixedIntervalSet.union([Interval(Q(0), Q(1, 2)), Interval(Q(1, 4), Q(3, 4))])
    b = FixedIntervalSet.union([Interval(Q(1, 2), Q(1))])

    assert a.components == (Interval(Q(0), Q(3, 4)),)
    assert a.intersect(b).components == (Interval(Q(1, 2), Q(3, 4)),)
    assert not a.intersect(FixedIntervalSet(()))


def test_bump_family_rejects_radius():
    with pytest.raises(BadRadius):
        bump_family(Q(0), Q(1, 2), 1)

    with pytest.raises(BadRadius):
        bump_family(Q(0), Q(0), 1)


def test_bump_family_common_fixed_set_is_the_arc():
    bumps = bump_family(Q(0), Q(1, 4), 2)
    common = bumps[0].fixed_set().intersect(bumps[1].fixed_set())

    assert common == FixedIntervalSet((Interval(Q(0), Q(1, 4)), Interval(Q(3, 4), Q(1))))
    assert all(b.fixes_neighbourhood(0) for b in bumps)
    assert bumps[0] != bumps[1]


def test_bump_family_rotates_with_its_center():
    (moved,) = bump_family(Q(1, 2), Q(1, 8), 1)
    (at_zero,) = bump_family(Q(0), Q(1, 8), 1)
    R = CircleHomeo.rotation(Q(1, 2))

    assert moved == R @ at_zero @ R.inverse()


@given(rationals(64), rationals(16).filter(lambda r: 0 < r < Q(1, 2)), st.integers(1, 4), rationals(64))
def test_bump_family_contract(center, radius, count, x):
    for f in bump_family(center, radius, count):
        distance = min((x - center) % 1, (center - x) % 1)

        assert f.fixes_neighbourhood(center)

        if distance <= radius:
            assert f(x) == x % 1
        else:
            assert f(x) != x % 1


def test_stabilizer_bumps_fix_exactly_the_arcs():
    bumps = stabilizer_bumps([Q(0), Q(1, 2)], Q(1, 8), 2)
    common = bumps[0].fixed_set().intersect(bumps[1].fixed_set())

    assert common == FixedIntervalSet(
        (Interval(Q(0), Q(1, 8)), Interval(Q(3, 8), Q(5, 8)), Interval(Q(7, 8), Q(1))),
    )
    assert all(b.fixes_neighbourhood(0) and b.fixes_neighbourhood(Q(1, 2)) for b in bumps)


def test_stabilizer_bumps_around_one_center_are_the_bump_family():
    assert stabilizer_bumps([Q(1, 3)], Q(1, 8), 3) == bump_family(Q(1, 3), Q(1, 8), 3)


def test_stabilizer_bumps_with_no_room_left():
    quarters = [Q(0), Q(1, 4), Q(1, 2), Q(3, 4)]

    assert stabilizer_bumps(quarters, Q(1, 8), 1) == [CircleHomeo.identity()]

    with pytest.raises(ValidationFailure):
        stabilizer_bumps([], Q(1, 8), 1)

    with pytest.raises(BadRadius):
        stabilizer_bumps([Q(0)], Q(1, 2), 1)
