"""Oracle fixtures: documents describing a hidden action for the recovery subcommands."""
from __future__ import annotations

from fractions import Fraction
import logging

from homeoact.actions import models
from homeoact.actions.surfaces import Surface, SurfaceMap
from homeoact.conjugacy import twist_conjugator
from homeoact.errors import ValidationFailure
from homeoact.lamination import GapSet, SignAssignment
from homeoact.pl import CircleHomeo, IntervalHomeo, LineHomeo
from homeoact.recovery.oracles import ActionOracle, ConjugatedLineOracle, LineActionOracle, ModelOracle
from homeoact.types import Model, Rational, Sign

log = logging.getLogger(__name__)


class OracleFixture(Model):
    """
    A model action, optionally conjugated, optionally hidden behind point queries.

    twists conjugate first (gaps of K), then conjugator lifts an interval homeomorphism.
    """

    model: str
    blocks: tuple[tuple[Rational, Rational], ...] | None = None
    signs: tuple[Sign, ...] = ()
    anchor: Rational = Fraction(0)
    conjugator: tuple[tuple[Rational, Rational], ...] | None = None
    twists: tuple[tuple[int, Sign], ...] = ()
    black_box: bool = False

    def gapset(self) -> GapSet | None:
        return None if self.blocks is None else GapSet(blocks=self.blocks)

    def oracle(self) -> ActionOracle:
        K = self.gapset()
        signs = None if K is None else SignAssignment(signs=self.signs)
        family = models.family(self.model, K, signs)
        surface = family(CircleHomeo.identity()).source
        oracle = ModelOracle(surface, family)

        if (self.twists or self.conjugator) and surface is not Surface.ANNULUS:
            raise ValidationFailure("twists and conjugators act on the annulus only")

        if self.twists and K is None:
            raise ValidationFailure("twists name gaps of K, give the blocks too")

        for index, sign in self.twists:
            oracle = oracle.conjugated(twist_conjugator(K, index, sign))  # type: ignore[arg-type]

        if self.conjugator is not None:
            oracle = oracle.conjugated(models.lift_to_annulus(IntervalHomeo.from_breakpoints(self.conjugator)))

        log.debug(f"built {'black-box ' if self.black_box else ''}oracle for model '{self.model}'")
        return oracle.hidden() if self.black_box else oracle

    def chart(self) -> SurfaceMap | None:
        """How the annulus fiber sits in the torus: the diagonal for the coordinatewise action."""
        return models.diag_chart() if self.model == "torus-diag" else None


class LineFixture(Model):
    """psi(f) = h o f o h^-1 for the PL homeomorphism h given by `conjugator`."""

    conjugator: tuple[tuple[Rational, Rational], ...] = ()
    black_box: bool = False
    shrink_schedule: tuple[Rational, ...] | None = None

    def oracle(self) -> LineActionOracle:
        oracle = ConjugatedLineOracle(LineHomeo.from_breakpoints(self.conjugator))
        return oracle.hidden() if self.black_box else oracle
