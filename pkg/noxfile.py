from __future__ import annotations

import nox

nox.options.sessions = ["tests"]


@nox.session(python=["3.12", "3.13"])
def tests(session: nox.Session) -> None:
    session.install("-e", ".[dev]")
    session.run("coverage", "run", "-m", "pytest", *session.posargs)
    session.run("coverage", "report", "-m")


@nox.session
def lint(session: nox.Session) -> None:
    session.install("ruff", "mypy", "pydantic")
    session.run("ruff", "check", "src", "tests")
    session.run("mypy", "src/homeoact")
