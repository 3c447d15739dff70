"""
JSON documents read and written by the command line.

Rationals travel as "num/den" strings and signs as "+1" / "-1", so every document
round-trips bit-exactly.
"""
from __future__ import annotations

from typing import Literal
import logging
import pathlib

import pydantic

from homeoact.errors import ParseFailure
from homeoact.lamination import GapSet, SignAssignment
from homeoact.pl import CircleHomeo, IntervalHomeo, LineHomeo
from homeoact.types import Model, Orientation, Rational, Sign

log = logging.getLogger(__name__)


class MapDocument(Model):
    """Breakpoint graph of a PL map, as {"breakpoints": [["0", "0"], ["1/2", "1/4"]]}."""

    breakpoints: tuple[tuple[Rational, Rational], ...]

    @classmethod
    def of(cls, f: CircleHomeo | IntervalHomeo | LineHomeo) -> MapDocument:
        return cls(breakpoints=f.breakpoints)

    def circle(self) -> CircleHomeo:
        return CircleHomeo.from_breakpoints(self.breakpoints)

    def interval(self) -> IntervalHomeo:
        return IntervalHomeo.from_breakpoints(self.breakpoints)

    def line(self) -> LineHomeo:
        return LineHomeo.from_breakpoints(self.breakpoints)


class LaminationDocument(Model):
    """(K, lambda) as {"blocks": [["0", "0"], ["1/2", "1"]], "signs": ["-1"]}."""

    blocks: tuple[tuple[Rational, Rational], ...]
    signs: tuple[Sign, ...] = ()

    @classmethod
    def of(cls, K: GapSet, signs: SignAssignment) -> LaminationDocument:
        return cls(blocks=K.blocks, signs=signs.signs)

    def gapset(self) -> GapSet:
        return GapSet(blocks=self.blocks)

    def sign_assignment(self) -> SignAssignment:
        signs = SignAssignment(signs=self.signs)
        signs.check(self.gapset())
        return signs


class WitnessRecipe(Model):
    """How to rebuild a conjugating map: the block matching, then twists on gaps of K'."""

    orientation: Orientation
    twists: tuple[tuple[int, Sign], ...] = ()


class VerdictDocument(Model):
    conjugate: bool
    orientation: Orientation | Literal["none"]
    witness: WitnessRecipe | None = None
    test_family: str


class VerificationDocument(Model):
    verified: bool
    test_family: str
    grid: int


class RecoveryReport(Model):
    """Recovered classifying data, with how much of it is certified."""

    model_config = pydantic.ConfigDict(populate_by_name=True)

    blocks: tuple[tuple[Rational, Rational], ...] = pydantic.Field(alias="K")
    signs: tuple[Sign, ...] | None = pydantic.Field(default=None, alias="lambda")
    certified: bool
    max_width: Rational
    anchor: Rational
    generator_budget: int

    def gapset(self) -> GapSet:
        return GapSet(blocks=self.blocks)


class RadialPoint(Model):
    r: Rational
    value: Rational
    width: Rational


class AnnulusConjugacyReport(Model):
    """
    The radial map g with g o phi_{K, lambda}(f) o g^-1 equal to the oracle's action,
    sampled on a grid. K and lambda are the recovered ones. Radial maps supported on K
    commute with the action, so g is only determined on the gaps and reads as r on K.
    """

    model_config = pydantic.ConfigDict(populate_by_name=True)

    blocks: tuple[tuple[Rational, Rational], ...] = pydantic.Field(alias="K")
    signs: tuple[Sign, ...] = pydantic.Field(alias="lambda")
    points: tuple[RadialPoint, ...]
    certified: bool
    max_width: Rational
    anchor: Rational

    def gapset(self) -> GapSet:
        return GapSet(blocks=self.blocks)


class LinePoint(Model):
    x: Rational
    value: Rational
    width: Rational


class LineRecoveryReport(Model):
    points: tuple[LinePoint, ...]
    certified: bool
    max_width: Rational


class ValueDocument(Model):
    point: Rational
    value: Rational


class ImageDocument(Model):
    model: str
    point: str
    image: str


def dump(document: pydantic.BaseModel) -> str:
    """Canonical text of a document: aliases, no nulls, stable indentation."""
    return document.model_dump_json(by_alias=True, exclude_none=True, indent=2)


def load[T: pydantic.BaseModel](kind: type[T], path: pathlib.Path) -> T:
    """Read a document, raising ParseFailure for unreadable files."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseFailure(f"cannot read '{path}': {e.strerror}") from None

    log.debug(f"read {kind.__name__} from {path}")
    return kind.model_validate_json(text)
