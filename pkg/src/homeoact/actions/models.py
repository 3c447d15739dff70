"""
Model actions of the circle homeomorphism group on surfaces, plus the charts and fixed
maps used to compare them.

Every constructor returns a SurfaceMap; `family` turns one of them into an action,
a callable CircleHomeo -> SurfaceMap.
"""
from __future__ import annotations

from collections.abc import Callable
import functools as ft

from homeoact.actions.moves import (
    DiagonalAction,
    DiagonalChart,
    GluedAction,
    RadialMap,
    Shear,
)
from homeoact.actions.surfaces import ActionFamily, Surface, SurfaceMap
from homeoact.errors import ValidationFailure
from homeoact.lamination import GapSet, SignAssignment
from homeoact.pl import CircleHomeo, IntervalHomeo


def act_phi(K: GapSet, signs: SignAssignment, f: CircleHomeo) -> SurfaceMap:
    """phi_{K, lambda}(f) on the closed annulus."""
    return SurfaceMap(Surface.ANNULUS, Surface.ANNULUS, (GluedAction(K, signs, f),))


def act_phi_torus(K: GapSet, signs: SignAssignment, f: CircleHomeo) -> SurfaceMap:
    """phi_{K, lambda}(f) on the torus, the annulus with r = 0 glued to r = 1."""
    return SurfaceMap(Surface.TORUS, Surface.TORUS, (GluedAction(K, signs, f, periodic=True),))


def act_phi_disc(K: GapSet, signs: SignAssignment, f: CircleHomeo) -> SurfaceMap:
    """phi_{K, lambda}(f) on the disc, the circle r = 0 collapsed to the cone point."""
    return SurfaceMap(Surface.DISC, Surface.DISC, (GluedAction(K, signs, f),))


def act_phi_sphere(K: GapSet, signs: SignAssignment, f: CircleHomeo) -> SurfaceMap:
    """phi_{K, lambda}(f) on the sphere, r = 0 and r = 1 collapsed to the poles."""
    return SurfaceMap(Surface.SPHERE, Surface.SPHERE, (GluedAction(K, signs, f),))


def act_p(f: CircleHomeo) -> SurfaceMap:
    return act_phi(GapSet.full(), SignAssignment.of(), f)


def act_a_minus(f: CircleHomeo) -> SurfaceMap:
    return act_phi(GapSet.boundary(), SignAssignment.of(-1), f)


def act_a_plus(f: CircleHomeo) -> SurfaceMap:
    return act_phi(GapSet.boundary(), SignAssignment.of(1), f)


def act_torus_diag(f: CircleHomeo) -> SurfaceMap:
    return SurfaceMap(Surface.TORUS, Surface.TORUS, (DiagonalAction(f),))


def diag_chart() -> SurfaceMap:
    """h(r, theta) = (theta, theta - r): both boundary circles land on the diagonal."""
    return SurfaceMap(Surface.ANNULUS, Surface.TORUS, (DiagonalChart(),))


def quotient_chart() -> SurfaceMap:
    """The annulus seen in the torus through the gluing r = 0 ~ r = 1."""
    return SurfaceMap(Surface.ANNULUS, Surface.TORUS)


def reflection() -> SurfaceMap:
    """T(r, theta) = (1 - r, theta)."""
    return lift_to_annulus(IntervalHomeo.reflection())


def shear(sign: int = 1) -> SurfaceMap:
    """S(r, theta) = (r, theta + r), or its inverse with sign -1."""
    return SurfaceMap(Surface.ANNULUS, Surface.ANNULUS, (Shear(sign),))


def lift_to_annulus(h: IntervalHomeo) -> SurfaceMap:
    """(r, theta) -> (h(r), theta)."""
    return SurfaceMap(Surface.ANNULUS, Surface.ANNULUS, (RadialMap(h),))


MODELS: dict[str, Callable[..., SurfaceMap]] = {
    "p": act_p,
    "a-minus": act_a_minus,
    "a-plus": act_a_plus,
    "torus-diag": act_torus_diag,
    "phi": act_phi,
    "phi-torus": act_phi_torus,
    "phi-disc": act_phi_disc,
    "phi-sphere": act_phi_sphere,
}
"""Model names as written in documents and on the command line."""

GLUED_MODELS = frozenset({"phi", "phi-torus", "phi-disc", "phi-sphere"})


def family(model: str, K: GapSet | None = None, signs: SignAssignment | None = None) -> ActionFamily:
    """The action named `model`; glued models need their (K, lambda)."""
    if model not in MODELS:
        raise ValidationFailure(f"unknown model '{model}', expected one of {', '.join(MODELS)}")

    build = MODELS[model]

    if model not in GLUED_MODELS:
        return build

    if K is None or signs is None:
        raise ValidationFailure(f"model '{model}' needs K and lambda")

    return ft.partial(build, K, signs)
