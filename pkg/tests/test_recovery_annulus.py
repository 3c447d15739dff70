from __future__ import annotations

from fractions import Fraction as Q

from hypothesis import given, settings, strategies as st
import pytest

from homeoact.actions import models
from homeoact.actions.surfaces import Surface, TorusPoint
from homeoact.config import Settings
from homeoact.conjugacy import block_matching_homeo, twist_conjugator
from homeoact.errors import (
    BadIndex,
    EmptyFixedSet,
    GeneratorNotInStabilizer,
    Inconclusive,
    OutOfRange,
    ValidationFailure,
)
from homeoact.lamination import GapSet, SignAssignment
from homeoact.pl import CircleHomeo, IntervalHomeo, bump_family, stabilizer_bumps
from homeoact.recovery import annulus
from homeoact.recovery.oracles import BlackBoxOracle, ModelOracle

from .strategies import laminations, monotone_interval_homeos, rationals

BUMPS = bump_family(Q(0), Q(1, 8), 2)


def _phi(K: GapSet, signs: SignAssignment) -> ModelOracle:
    return ModelOracle(Surface.ANNULUS, models.family("phi", K, signs))


def _ends(fixed: annulus.FixedFiberSet) -> list[tuple[Q, Q]]:
    return [(c.lo, c.hi) for c in fixed.components]


def test_fixed_fiber_set_of_the_product_action():
    fixed = annulus.fiber_fixed_set(ModelOracle(Surface.ANNULUS, models.act_p), Q(0), BUMPS)

    assert _ends(fixed) == [(0, 1)]
    assert fixed.certified


def test_fixed_fiber_set_of_a_minus():
    fixed = annulus.fiber_fixed_set(ModelOracle(Surface.ANNULUS, models.act_a_minus), Q(0), BUMPS)

    assert _ends(fixed) == [(0, Q(1, 8)), (Q(7, 8), 1)]


def test_fixed_fiber_set_thickens_K_into_its_gaps():
    K = GapSet.from_blocks((0, 0), ("1/2", 1))
    fixed = annulus.fiber_fixed_set(_phi(K, SignAssignment.of(-1)), Q(0), BUMPS)

    assert _ends(fixed) == [(0, Q(1, 16)), (Q(7, 16), 1)]
    assert fixed.holds(Q(3, 4))
    assert not fixed.holds(Q(1, 4))


def test_generators_must_fix_the_anchor():
    with pytest.raises(GeneratorNotInStabilizer):
        annulus.fiber_fixed_set(_phi(GapSet.boundary(), SignAssignment.of(1)), Q(0), [CircleHomeo.rotation(Q(1, 2))])


@given(laminations(max_gaps=3), rationals(16))
def test_more_generators_fix_less(lamination, theta0):
    K, signs = lamination
    oracle = _phi(K, signs)
    few = annulus.fiber_fixed_set(oracle, theta0, bump_family(theta0, Q(1, 4), 1))
    many = annulus.fiber_fixed_set(oracle, theta0, [*bump_family(theta0, Q(1, 4), 1), *bump_family(theta0, Q(1, 8), 1)])

    assert all(few.holds(r) for r in (Q(i, 64) for i in range(65)) if many.holds(r))


def test_recover_gapset_examples(middle_block):
    assert annulus.recover_gapset(_phi(middle_block, SignAssignment.of(1, -1)), Q(0)) == middle_block
    assert annulus.recover_gapset(ModelOracle(Surface.ANNULUS, models.act_a_plus), Q(1, 3)) == GapSet.boundary()
    assert annulus.recover_gapset(ModelOracle(Surface.ANNULUS, models.act_p), Q(0)) == GapSet.full()


def test_recover_needs_two_radii(middle_block):
    with pytest.raises(ValidationFailure):
        annulus.recover_gapset(_phi(middle_block, SignAssignment.of(1, -1)), Q(0), generator_budget=1)


@settings(max_examples=25)
@given(laminations(max_gaps=5, max_denominator=32), rationals(32))
def test_recover_annulus_round_trip(lamination, theta0):
    K, signs = lamination
    report = annulus.recover_annulus(_phi(K, signs), theta0)

    assert report.gapset() == K
    assert report.signs == signs.signs
    assert report.certified
    assert report.max_width == 0


def _orientation(h: IntervalHomeo) -> str:
    return "increasing" if h.increasing else "decreasing"


@settings(max_examples=20)
@given(laminations(max_gaps=3, max_denominator=16), monotone_interval_homeos(max_denominator=16))
def test_recovery_sees_through_any_radial_conjugator(lamination, h):
    K, signs = lamination
    oracle = _phi(K, signs).conjugated(models.lift_to_annulus(h))
    report = annulus.recover_annulus(oracle, Q(0))

    assert report.gapset() == K.image(h)
    assert report.signs == signs.transported(_orientation(h)).signs
    assert report.certified


def test_a_conjugator_bending_close_to_K_is_not_extrapolated_past():
    h = IntervalHomeo.from_breakpoints([(0, 0), ("1/100", "1/50"), (1, 1)])
    oracle = _phi(GapSet.boundary(), SignAssignment.of(-1)).conjugated(models.lift_to_annulus(h))
    report = annulus.recover_annulus(oracle, Q(0))

    assert report.gapset() == GapSet.boundary()
    assert report.signs == (-1,)
    assert report.certified


@settings(max_examples=15)
@given(laminations(max_gaps=3), st.data())
def test_twist_conjugation_flips_one_sign(lamination, data):
    K, signs = lamination

    if not K.gaps:
        return

    index = data.draw(st.integers(0, len(K.gaps) - 1))
    oracle = _phi(K, signs).conjugated(twist_conjugator(K, index, signs[index]))

    assert annulus.recover_gapset(oracle, Q(0)) == K
    assert annulus.recover_signs(oracle, K, Q(0)) == signs.flipped(index)


def test_detect_sign_examples():
    K = GapSet.boundary()

    assert annulus.detect_sign(ModelOracle(Surface.ANNULUS, models.act_a_plus), K, 0, Q(0)) == 1
    assert annulus.detect_sign(ModelOracle(Surface.ANNULUS, models.act_a_minus), K, 0, Q(1, 2)) == -1


def test_detect_sign_without_displacement():
    with pytest.raises(Inconclusive):
        annulus.detect_sign(ModelOracle(Surface.ANNULUS, models.act_p), GapSet.boundary(), 0, Q(0))


def test_detect_sign_refuses_a_gap_which_is_not_one():
    wrong = GapSet.from_blocks((0, 0), ("1/2", "1/2"), (1, 1))

    with pytest.raises(Inconclusive):
        annulus.detect_sign(ModelOracle(Surface.ANNULUS, models.act_a_minus), wrong, 0, Q(0))

    with pytest.raises(BadIndex):
        annulus.detect_sign(ModelOracle(Surface.ANNULUS, models.act_a_minus), wrong, 2, Q(0))


def test_recover_signs_with_no_gaps():
    oracle = ModelOracle(Surface.ANNULUS, models.act_p)

    assert annulus.recover_signs(oracle, GapSet.full(), Q(0)) == SignAssignment.of()


@settings(max_examples=20)
@given(laminations(max_gaps=3), rationals(16).map(lambda t: t % 1))
def test_every_probe_reads_the_same_sign(lamination, theta0):
    K, signs = lamination
    oracle = _phi(K, signs)
    probes = [
        *bump_family(theta0, Q(1, 4), 3),
        *bump_family(theta0, Q(1, 16), 1),
        *stabilizer_bumps([theta0, theta0 + Q(1, 2)], Q(1, 8), 2),
    ]

    for gap in K.gaps:
        assert {annulus.detect_sign(oracle, K, gap.index, theta0, probe) for probe in probes} == {signs[gap.index]}


def test_detect_sign_refuses_unsuitable_probes():
    oracle = ModelOracle(Surface.ANNULUS, models.act_a_minus)

    with pytest.raises(GeneratorNotInStabilizer):
        annulus.detect_sign(oracle, GapSet.boundary(), 0, Q(0), CircleHomeo.rotation(Q(1, 3)))

    with pytest.raises(ValidationFailure, match="below the identity"):
        annulus.detect_sign(oracle, GapSet.boundary(), 0, Q(0), bump_family(Q(0), Q(1, 4), 1)[0].inverse())


def test_recover_the_radial_conjugator_of_a_bending_map():
    h = IntervalHomeo.from_breakpoints([(0, 0), ("1/100", "1/50"), (1, 1)])
    oracle = _phi(GapSet.boundary(), SignAssignment.of(-1)).conjugated(models.lift_to_annulus(h))
    grid = [Q(0), Q(1, 200), Q(1, 4), Q(1, 2), Q(1)]
    report = annulus.recover_annulus_conjugacy(oracle, grid)

    assert [p.r for p in report.points] == grid
    assert [p.value for p in report.points] == [h(r) for r in grid]
    assert report.certified
    assert report.max_width == 0


@settings(max_examples=10)
@given(
    laminations(max_gaps=2, max_denominator=8),
    monotone_interval_homeos(max_breakpoints=3, max_denominator=8),
    rationals(8).map(lambda t: t % 1),
)
def test_recovered_radial_conjugator_matches_on_the_gaps(lamination, h, theta0):
    K, signs = lamination
    K_ = K.image(h)
    b = block_matching_homeo(K, K_, _orientation(h))
    oracle = _phi(K, signs).conjugated(models.lift_to_annulus(h))
    grid = [Q(i, 12) for i in range(13)]
    report = annulus.recover_annulus_conjugacy(oracle, grid, theta0)

    assert report.gapset() == K_
    assert report.signs == signs.transported(_orientation(h)).signs
    assert report.certified

    for point in report.points:
        expected = point.r if K_.locate(point.r) is None else h(b.inverse()(point.r))
        assert point.value == expected


def test_black_box_radial_conjugator_is_close_but_uncertified():
    h = IntervalHomeo.from_breakpoints([(0, 0), ("1/2", "1/4"), (1, 1)])
    oracle = _phi(GapSet.boundary(), SignAssignment.of(1)).conjugated(models.lift_to_annulus(h)).hidden()
    grid = [Q(1, 4), Q(3, 4)]
    report = annulus.recover_annulus_conjugacy(oracle, grid, settings=Settings(bisection_exponent=24, probe_grid=256))

    assert not report.certified

    for point in report.points:
        assert 0 < point.width <= Q(1, 2 ** 18)
        assert abs(point.value - h(point.r)) <= Q(1, 2 ** 18)


def test_recover_conjugacy_needs_radii_in_the_annulus():
    oracle = _phi(GapSet.boundary(), SignAssignment.of(1))

    with pytest.raises(ValidationFailure):
        annulus.recover_annulus_conjugacy(oracle, [])

    with pytest.raises(OutOfRange):
        annulus.recover_annulus_conjugacy(oracle, [Q(1, 2), Q(3, 2)])


@settings(max_examples=15)
@given(laminations(max_gaps=4), rationals(32))
def test_recover_torus_round_trip(lamination, theta0):
    K, signs = lamination
    oracle = ModelOracle(Surface.TORUS, models.family("phi-torus", K, signs))
    report = annulus.recover_torus(oracle, theta0)

    assert report.gapset() == K
    assert report.signs is None
    assert annulus.recover_torus_circle(oracle, theta0) == K


def test_recover_torus_diag_through_the_diagonal_chart():
    oracle = ModelOracle(Surface.TORUS, models.act_torus_diag)

    assert annulus.recover_torus_circle(oracle, Q(1, 4), chart=models.diag_chart()) == GapSet.boundary()


def test_recover_torus_needs_a_torus():
    with pytest.raises(ValidationFailure):
        annulus.recover_torus(ModelOracle(Surface.ANNULUS, models.act_p))

    with pytest.raises(ValidationFailure):
        annulus.detect_sign(ModelOracle(Surface.TORUS, models.act_torus_diag), GapSet.boundary(), 0, Q(0))


def test_nothing_fixed():
    spin = BlackBoxOracle(Surface.TORUS, lambda f, p: TorusPoint(p.x, (p.y + Q(1, 2)) % 1))

    with pytest.raises(EmptyFixedSet):
        annulus.recover_torus(spin)


def test_black_box_recovery_is_close_but_uncertified(middle_block):
    signs = SignAssignment.of(1, -1)
    oracle = _phi(middle_block, signs).hidden()
    report = annulus.recover_annulus(oracle, Q(0), settings=Settings(bisection_exponent=24))

    assert not report.certified
    assert 0 < report.max_width <= Q(3, 2 ** 24)
    assert report.signs == signs.signs
    assert len(report.blocks) == len(middle_block.blocks)

    for got, want in zip(report.blocks, middle_block.blocks, strict=True):
        assert abs(got[0] - want[0]) <= report.max_width
        assert abs(got[1] - want[1]) <= report.max_width


def test_black_box_fixed_set_is_on_the_fixed_side():
    K = GapSet.from_blocks((0, 0), ("1/2", 1))
    oracle = _phi(K, SignAssignment.of(-1)).hidden()
    fixed = annulus.fiber_fixed_set(oracle, Q(0), BUMPS, settings=Settings(bisection_exponent=16))

    assert not fixed.certified
    assert len(fixed.components) == 2
    assert Q(1, 16) - fixed.width <= fixed.components[0].hi <= Q(1, 16)
    assert Q(7, 16) <= fixed.components[1].lo <= Q(7, 16) + fixed.width
