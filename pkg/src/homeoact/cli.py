from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from typing import Annotated, Any
import functools as ft
import logging
import pathlib

import pydantic
import typer

from homeoact import _logging, _utils, conjugacy, const, documents
from homeoact.actions import models
from homeoact.actions.surfaces import AnnulusPoint, Pole, SurfacePoint
from homeoact.config import Settings
from homeoact.errors import ParseFailure, RecoveryFailure, ValidationFailure
from homeoact.recovery import annulus, line
from homeoact.recovery.fixtures import LineFixture, OracleFixture
from homeoact.types import Rational

log = logging.getLogger(__name__)

app = typer.Typer(
    name="homeoact",
    help="Exact model actions of circle homeomorphisms on surfaces: evaluate, compare, recover.",
    no_args_is_help=True,
    add_completion=False,
)

MapOpt = Annotated[pathlib.Path, typer.Option("--map", help="circle map document")]
OutputOpt = Annotated[
    pathlib.Path | None, typer.Option("--output", "-o", help="write the result document here instead of stdout"),
]
_RECIPE_OR_VERDICT = pydantic.TypeAdapter(
    Annotated[documents.VerdictDocument | documents.WitnessRecipe, pydantic.Field(union_mode="left_to_right")],
)


def _exit_codes(command: Callable[..., None]) -> Callable[..., None]:
    """0 on success, 2 for unreadable or invalid input, 3 when recovery cannot certify."""

    @ft.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except (ParseFailure, ValidationFailure, pydantic.ValidationError) as e:
            log.error(f"invalid input: {e}")
            raise typer.Exit(code=2) from None
        except RecoveryFailure as e:
            log.error(f"recovery failed ({type(e).__name__}): {e}")
            raise typer.Exit(code=3) from None

    return wrapper


def _emit(document: pydantic.BaseModel, output: pathlib.Path | None) -> None:
    text = documents.dump(document)

    if output is None:
        typer.echo(text)
    else:
        output.write_text(text + "\n", encoding="utf-8")
        log.info(f"wrote {type(document).__name__} to {output}")


def _parse_point(text: str) -> SurfacePoint:
    """"r,theta" (or "x,y" on the torus), or the name of a pole."""
    text = text.strip().lower()

    if text in {pole.value for pole in Pole}:
        return Pole(text)

    parts = text.split(",")

    if len(parts) != 2:
        raise ParseFailure(f"'{text}' is not a point, write 'r,theta' or one of cone, north, south")

    return AnnulusPoint(*(_utils.parse_rational(part) for part in parts))


def _settings(ctx: typer.Context) -> Settings:
    return ctx.obj if isinstance(ctx.obj, Settings) else Settings()


@app.callback()
def main(
    ctx: typer.Context,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="log at DEBUG level")] = False,
) -> None:
    settings = Settings.from_env()
    _logging.configure("DEBUG" if verbose else settings.log_level)
    ctx.obj = settings


@app.command(name="eval")
@_exit_codes
def evaluate(
    map_path: MapOpt,
    point: Annotated[str, typer.Option("--point", help="a rational angle, e.g. 1/3")],
    lift: Annotated[bool, typer.Option("--lift", help="evaluate the normalized lift instead")] = False,
    output: OutputOpt = None,
) -> None:
    """Evaluate a circle map at one point."""
    f = documents.load(documents.MapDocument, map_path).circle()
    x = _utils.parse_rational(point)
    value = f.lift(x) if lift else f(x)
    _emit(documents.ValueDocument(point=x, value=value), output)


@app.command()
@_exit_codes
def act(
    model: Annotated[str, typer.Option("--model", help=f"one of {', '.join([*models.MODELS, 'chart'])}")],
    point: Annotated[str, typer.Option("--point", help="'r,theta', 'x,y', cone, north or south")],
    map_path: Annotated[pathlib.Path | None, typer.Option("--map", help="circle map document")] = None,
    data: Annotated[pathlib.Path | None, typer.Option("--data", help="(K, lambda) document")] = None,
    inverse: Annotated[bool, typer.Option("--inverse", help="apply the inverse map")] = False,
    output: OutputOpt = None,
) -> None:
    """Apply a model action (or the diagonal chart) to one point."""
    if model == "chart":
        surface_map = models.diag_chart()
    else:
        if map_path is None:
            raise ValidationFailure(f"model '{model}' needs --map")

        f = documents.load(documents.MapDocument, map_path).circle()
        K = signs = None

        if data is not None:
            lamination = documents.load(documents.LaminationDocument, data)
            K, signs = lamination.gapset(), lamination.sign_assignment()

        surface_map = models.family(model, K, signs)(f)

    if inverse:
        surface_map = surface_map.inverse()

    x = _parse_point(point)
    _emit(documents.ImageDocument(model=model, point=str(x), image=str(surface_map(x))), output)


@app.command()
@_exit_codes
def decide(
    left: Annotated[pathlib.Path, typer.Option("--left", help="(K, lambda) document")],
    right: Annotated[pathlib.Path, typer.Option("--right", help="(K', lambda') document")],
    output: OutputOpt = None,
) -> None:
    """Decide whether two glued actions on the annulus are conjugate."""
    a = documents.load(documents.LaminationDocument, left)
    b = documents.load(documents.LaminationDocument, right)
    verdict = conjugacy.decide_conjugacy(a.gapset(), a.sign_assignment(), b.gapset(), b.sign_assignment())
    _emit(verdict.document(), output)


def _read_recipe(path: pathlib.Path) -> documents.WitnessRecipe:
    """A bare recipe, or the witness of a verdict document."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseFailure(f"cannot read '{path}': {e.strerror}") from None

    document = _RECIPE_OR_VERDICT.validate_json(text)

    if isinstance(document, documents.WitnessRecipe):
        return document

    if document.witness is None:
        raise ValidationFailure(f"the verdict in '{path}' has no witness to verify")

    return document.witness


@app.command()
@_exit_codes
def verify(
    ctx: typer.Context,
    witness: Annotated[pathlib.Path, typer.Option("--witness", help="witness recipe or verdict document")],
    left: Annotated[pathlib.Path, typer.Option("--left", help="(K, lambda) document")],
    right: Annotated[pathlib.Path, typer.Option("--right", help="(K', lambda') document")],
    grid: Annotated[int | None, typer.Option("--grid", help="side of the rational sample grid", min=2)] = None,
    output: OutputOpt = None,
) -> None:
    """Check a conjugacy witness on the standard test family and a rational grid."""
    n = grid or _settings(ctx).grid
    recipe = _read_recipe(witness)
    a = documents.load(documents.LaminationDocument, left)
    b = documents.load(documents.LaminationDocument, right)
    ok = conjugacy.verify_recipe(a.gapset(), a.sign_assignment(), b.gapset(), b.sign_assignment(), recipe, grid=n)
    _emit(documents.VerificationDocument(verified=ok, test_family=const.STANDARD_FAMILY_NAME, grid=n), output)


@app.command(name="recover-annulus")
@_exit_codes
def recover_annulus(
    ctx: typer.Context,
    oracle: Annotated[pathlib.Path, typer.Option("--oracle", help="oracle fixture document")],
    budget: Annotated[int | None, typer.Option("--budget", help="number of bump radii", min=2)] = None,
    anchor: Annotated[str | None, typer.Option("--anchor", help="angle of the probed fiber")] = None,
    output: OutputOpt = None,
) -> None:
    """Recover (K, lambda) from an annulus oracle."""
    settings = _settings(ctx)
    fixture = documents.load(OracleFixture, oracle)
    theta0 = fixture.anchor if anchor is None else _utils.parse_rational(anchor)
    report = annulus.recover_annulus(
        fixture.oracle(), theta0, budget or settings.generator_budget, settings=settings,
    )
    _emit(report, output)


@app.command(name="recover-torus")
@_exit_codes
def recover_torus(
    ctx: typer.Context,
    oracle: Annotated[pathlib.Path, typer.Option("--oracle", help="oracle fixture document")],
    budget: Annotated[int | None, typer.Option("--budget", help="number of bump radii", min=2)] = None,
    anchor: Annotated[str | None, typer.Option("--anchor", help="angle of the probed fiber")] = None,
    output: OutputOpt = None,
) -> None:
    """Recover the invariant circles of a torus oracle, cut open into an annulus."""
    settings = _settings(ctx)
    fixture = documents.load(OracleFixture, oracle)
    theta0 = fixture.anchor if anchor is None else _utils.parse_rational(anchor)
    report = annulus.recover_torus(
        fixture.oracle(), theta0, budget or settings.generator_budget, chart=fixture.chart(), settings=settings,
    )
    _emit(report, output)


@app.command(name="recover-conjugacy")
@_exit_codes
def recover_conjugacy(
    ctx: typer.Context,
    oracle: Annotated[pathlib.Path, typer.Option("--oracle", help="oracle fixture document")],
    grid: Annotated[pathlib.Path, typer.Option("--grid", help="JSON list of radii in [0, 1]")],
    budget: Annotated[int | None, typer.Option("--budget", help="number of bump radii", min=2)] = None,
    anchor: Annotated[str | None, typer.Option("--anchor", help="angle of the probed fiber")] = None,
    output: OutputOpt = None,
) -> None:
    """Recover (K, lambda) and the radial conjugating map of an annulus oracle on a grid."""
    settings = _settings(ctx)
    fixture = documents.load(OracleFixture, oracle)
    theta0 = fixture.anchor if anchor is None else _utils.parse_rational(anchor)
    report = annulus.recover_annulus_conjugacy(
        fixture.oracle(), _read_grid(grid), theta0, budget or settings.generator_budget, settings=settings,
    )
    _emit(report, output)


def _read_grid(path: pathlib.Path) -> list[Fraction]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseFailure(f"cannot read '{path}': {e.strerror}") from None

    return list(pydantic.TypeAdapter(tuple[Rational, ...]).validate_json(text))


@app.command(name="recover-line")
@_exit_codes
def recover_line(
    ctx: typer.Context,
    oracle: Annotated[pathlib.Path, typer.Option("--oracle", help="line oracle fixture document")],
    grid: Annotated[pathlib.Path, typer.Option("--grid", help="JSON list of rational grid points")],
    output: OutputOpt = None,
) -> None:
    """Recover the conjugating homeomorphism of a line action on a grid."""
    fixture = documents.load(LineFixture, oracle)
    points = _read_grid(grid)
    schedule = fixture.shrink_schedule or const.LINE_SHRINK_SCHEDULE
    estimates = line.recover_line_conjugacy(fixture.oracle(), points, schedule, settings=_settings(ctx))
    _emit(line.line_report(estimates), output)
