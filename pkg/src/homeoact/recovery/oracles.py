"""
Oracles hand a recovery algorithm the action it is trying to identify.

A model oracle also exposes the exact SurfaceMap behind each query, which lets recovery
solve for fixed sets exactly. A black-box oracle answers point queries only, and
recovery falls back to sampling and bisection.
"""
from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
import abc
import dataclasses

from homeoact.actions.surfaces import ActionFamily, Surface, SurfaceMap, SurfacePoint
from homeoact.pl import CircleHomeo, LineHomeo


class ActionOracle(abc.ABC):
    """An action of the circle homeomorphism group on a surface, queried pointwise."""

    surface: Surface

    @abc.abstractmethod
    def query(self, f: CircleHomeo, point: SurfacePoint) -> SurfacePoint:
        ...

    def surface_map(self, f: CircleHomeo) -> SurfaceMap | None:  # noqa: ARG002
        """The exact map behind query(f, .), when the oracle is willing to show it."""
        return None

    @abc.abstractmethod
    def conjugated(self, g: SurfaceMap) -> ActionOracle:
        """The oracle for f -> g o phi(f) o g^-1."""


@dataclasses.dataclass(frozen=True)
class _Conjugated:
    family: ActionFamily
    g: SurfaceMap

    def __call__(self, f: CircleHomeo) -> SurfaceMap:
        return self.family(f).conjugate(self.g)


@dataclasses.dataclass(frozen=True)
class ModelOracle(ActionOracle):
    surface: Surface
    family: ActionFamily

    def query(self, f: CircleHomeo, point: SurfacePoint) -> SurfacePoint:
        return self.family(f)(point)

    def surface_map(self, f: CircleHomeo) -> SurfaceMap:
        return self.family(f)

    def conjugated(self, g: SurfaceMap) -> ModelOracle:
        return ModelOracle(self.surface, _Conjugated(self.family, g))

    def hidden(self) -> BlackBoxOracle:
        """The same action, with the exact maps withheld."""
        return BlackBoxOracle(self.surface, self.query)


@dataclasses.dataclass(frozen=True)
class BlackBoxOracle(ActionOracle):
    surface: Surface
    ask: Callable[[CircleHomeo, SurfacePoint], SurfacePoint]

    def query(self, f: CircleHomeo, point: SurfacePoint) -> SurfacePoint:
        return self.ask(f, point)

    def conjugated(self, g: SurfaceMap) -> BlackBoxOracle:
        g_inverse = g.inverse()
        return BlackBoxOracle(self.surface, lambda f, x: g(self.ask(f, g_inverse(x))))


class LineActionOracle(abc.ABC):
    """An action of the compactly supported homeomorphisms of the line on the line."""

    @abc.abstractmethod
    def query(self, f: LineHomeo, x: Fraction) -> Fraction:
        ...

    def image(self, f: LineHomeo) -> LineHomeo | None:  # noqa: ARG002
        """The exact image of f, when the oracle is willing to show it."""
        return None


@dataclasses.dataclass(frozen=True)
class ConjugatedLineOracle(LineActionOracle):
    """psi(f) = h o f o h^-1; h = identity is the inclusion."""

    h: LineHomeo = dataclasses.field(default_factory=LineHomeo.identity)

    def query(self, f: LineHomeo, x: Fraction) -> Fraction:
        return self.h(f(self.h.inverse_at(x)))

    def image(self, f: LineHomeo) -> LineHomeo:
        return self.h @ f @ self.h.inverse()

    def hidden(self) -> BlackBoxLineOracle:
        return BlackBoxLineOracle(self.query)


@dataclasses.dataclass(frozen=True)
class BlackBoxLineOracle(LineActionOracle):
    ask: Callable[[LineHomeo, Fraction], Fraction]

    def query(self, f: LineHomeo, x: Fraction) -> Fraction:
        return self.ask(f, x)
