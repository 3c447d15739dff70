from __future__ import annotations

import json

from typer.testing import CliRunner
import pydantic
import pytest

from homeoact import const
from homeoact.cli import app
from homeoact.config import Settings
from homeoact.errors import Inconclusive, ValidationFailure
from homeoact.lamination import GapSet
from homeoact.recovery.fixtures import OracleFixture

runner = CliRunner()


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    monkeypatch.setenv("HOMEOACT_LOG_LEVEL", "ERROR")


@pytest.fixture
def write(tmp_path):
    def _write(name: str, content: object) -> str:
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(path)

    return _write


def _run(*args: str) -> tuple[int, dict]:
    result = runner.invoke(app, list(args))
    return result.exit_code, json.loads(result.stdout) if result.exit_code == 0 else {}


def test_eval(write):
    f = write("f.json", {"breakpoints": [["0", "0"], ["1/2", "1/4"]]})

    assert _run("eval", "--map", f, "--point", "3/4") == (0, {"point": "3/4", "value": "5/8"})
    assert _run("eval", "--map", f, "--point", "-1/4", "--lift") == (0, {"point": "-1/4", "value": "-3/8"})


def test_act(write):
    f = write("f.json", {"breakpoints": [["0", "0"], ["1/2", "1/4"]]})
    data = write("k.json", {"blocks": [["0", "0"], ["1/3", "1/2"], ["1", "1"]], "signs": ["+1", "-1"]})

    code, doc = _run("act", "--model", "a-minus", "--map", f, "--point", "1/2,1/4")
    assert code == 0
    assert doc["image"] == "1/2,1/8"

    code, doc = _run("act", "--model", "phi-sphere", "--map", f, "--data", data, "--point", "north")
    assert code == 0
    assert doc["image"] == "north"

    code, doc = _run("act", "--model", "chart", "--point", "1/2,1/4")
    assert doc["image"] == "1/4,3/4"

    code, doc = _run("act", "--model", "a-minus", "--map", f, "--point", "1/2,1/8", "--inverse")
    assert doc["image"] == "1/2,1/4"


def test_act_refuses_bad_input(write):
    f = write("f.json", {"breakpoints": [["0", "0"]]})

    assert _run("act", "--model", "phi", "--map", f, "--point", "0,0")[0] == 2
    assert _run("act", "--model", "p", "--map", f, "--point", "north")[0] == 2
    assert _run("act", "--model", "p", "--map", f, "--point", "1/2")[0] == 2
    assert _run("act", "--model", "p", "--point", "0,0")[0] == 2


def test_decide_and_verify(write, tmp_path):
    left = write("left.json", {"blocks": [["0", "0"], ["1", "1"]], "signs": ["+1"]})
    right = write("right.json", {"blocks": [["0", "0"], ["1", "1"]], "signs": ["-1"]})
    verdict = tmp_path / "verdict.json"

    result = runner.invoke(app, ["decide", "--left", left, "--right", right, "--output", str(verdict)])
    doc = json.loads(verdict.read_text())

    assert result.exit_code == 0
    assert doc["conjugate"] is True
    assert doc["orientation"] == "increasing"
    assert doc["witness"]["twists"] == [[0, "+1"]]

    code, checked = _run("verify", "--witness", str(verdict), "--left", left, "--right", right, "--grid", "6")
    assert code == 0
    assert checked["verified"] is True
    assert checked["grid"] == 6

    code, checked = _run("verify", "--witness", str(verdict), "--left", left, "--right", left, "--grid", "6")
    assert code == 0
    assert checked["verified"] is False


def test_decide_not_conjugate(write):
    left = write("left.json", {"blocks": [["0", "0"], ["1/3", "1/2"], ["1", "1"]], "signs": ["+1", "+1"]})
    right = write("right.json", {"blocks": [["0", "0"], ["1/4", "1/4"], ["1", "1"]], "signs": ["+1", "+1"]})

    code, doc = _run("decide", "--left", left, "--right", right)

    assert code == 0
    assert doc == {"conjugate": False, "orientation": "none", "test_family": const.STANDARD_FAMILY_NAME}


def test_decide_invalid_documents(write):
    bad = write("bad.json", {"blocks": [["0", "1/2"]], "signs": []})
    mismatch = write("mismatch.json", {"blocks": [["0", "0"], ["1", "1"]], "signs": []})
    good = write("good.json", {"blocks": [["0", "0"], ["1", "1"]], "signs": ["-1"]})
    garbage = write("garbage.json", "{not json")

    assert _run("decide", "--left", bad, "--right", good)[0] == 2
    assert _run("decide", "--left", mismatch, "--right", good)[0] == 2
    assert _run("decide", "--left", garbage, "--right", good)[0] == 2
    assert _run("decide", "--left", "missing.json", "--right", good)[0] == 2


def test_verify_reads_bare_recipes_and_refuses_verdicts_without_a_witness(write):
    left = write("left.json", {"blocks": [["0", "0"], ["1", "1"]], "signs": ["+1"]})
    right = write("right.json", {"blocks": [["0", "0"], ["1", "1"]], "signs": ["-1"]})
    recipe = write("recipe.json", {"orientation": "increasing", "twists": [[0, "+1"]]})
    refused = write("refused.json", {"conjugate": False, "orientation": "none", "test_family": "none"})
    garbage = write("garbage.json", "[1, 2")

    code, checked = _run("verify", "--witness", recipe, "--left", left, "--right", right, "--grid", "6")

    assert code == 0
    assert checked["verified"] is True
    assert _run("verify", "--witness", refused, "--left", left, "--right", right)[0] == 2
    assert _run("verify", "--witness", garbage, "--left", left, "--right", right)[0] == 2
    assert _run("verify", "--witness", "missing.json", "--left", left, "--right", right)[0] == 2


def test_recover_annulus(write):
    oracle = write(
        "oracle.json",
        {"model": "phi", "blocks": [["0", "0"], ["1/3", "1/2"], ["1", "1"]], "signs": ["+1", "-1"], "anchor": "1/5"},
    )
    code, report = _run("recover-annulus", "--oracle", oracle)

    assert code == 0
    assert report["K"] == [["0", "0"], ["1/3", "1/2"], ["1", "1"]]
    assert report["lambda"] == ["+1", "-1"]
    assert report["certified"] is True
    assert report["anchor"] == "1/5"


def test_recover_annulus_through_a_twist(write):
    oracle = write(
        "oracle.json",
        {"model": "a-plus", "blocks": [["0", "0"], ["1", "1"]], "signs": ["+1"], "twists": [[0, "+1"]]},
    )
    code, report = _run("recover-annulus", "--oracle", oracle, "--budget", "3")

    assert code == 0
    assert report["lambda"] == ["-1"]
    assert report["generator_budget"] == 3


def test_recover_torus(write):
    oracle = write("oracle.json", {"model": "torus-diag"})
    code, report = _run("recover-torus", "--oracle", oracle, "--anchor", "1/4")

    assert code == 0
    assert report["K"] == [["0", "0"], ["1", "1"]]
    assert "lambda" not in report


def test_recover_conjugacy(write):
    oracle = write("oracle.json", {"model": "a-minus", "conjugator": [["0", "0"], ["1/2", "1/4"], ["1", "1"]]})
    grid = write("grid.json", ["0", "1/4", "1/2", "1"])
    code, report = _run("recover-conjugacy", "--oracle", oracle, "--grid", grid)

    assert code == 0
    assert report["K"] == [["0", "0"], ["1", "1"]]
    assert report["lambda"] == ["-1"]
    assert [(p["r"], p["value"]) for p in report["points"]] == [("0", "0"), ("1/4", "1/8"), ("1/2", "1/4"), ("1", "1")]
    assert report["certified"] is True


def test_recover_conjugacy_refuses_radii_off_the_annulus(write):
    oracle = write("oracle.json", {"model": "a-plus"})
    grid = write("grid.json", ["1/2", "3/2"])

    assert _run("recover-conjugacy", "--oracle", oracle, "--grid", grid)[0] == 2


def test_recover_line(write):
    oracle = write("line.json", {"conjugator": [["0", "0"], ["1/2", "1/4"], ["1", "1"]]})
    grid = write("grid.json", ["1/4", "1/2", "2"])
    code, report = _run("recover-line", "--oracle", oracle, "--grid", grid)

    assert code == 0
    assert [(p["x"], p["value"]) for p in report["points"]] == [("1/4", "1/8"), ("1/2", "1/4"), ("2", "2")]
    assert report["certified"] is True


def test_recovery_failure_exits_with_3(write, monkeypatch):
    def give_up(*args, **kwargs):
        raise Inconclusive("no displacement")

    monkeypatch.setattr("homeoact.recovery.annulus.recover_annulus", give_up)
    oracle = write("oracle.json", {"model": "a-minus"})

    assert _run("recover-annulus", "--oracle", oracle)[0] == 3


def test_settings_from_the_environment(monkeypatch):
    monkeypatch.setenv("HOMEOACT_GENERATOR_BUDGET", "6")
    monkeypatch.setenv("HOMEOACT_PROBE_GRID", "128")

    settings = Settings.from_env(dotenv_path="/nonexistent/.env")

    assert settings.generator_budget == 6
    assert settings.probe_grid == 128
    assert settings.log_level == "ERROR"

    monkeypatch.setenv("HOMEOACT_GENERATOR_BUDGET", "1")

    with pytest.raises(pydantic.ValidationError):
        Settings.from_env(dotenv_path="/nonexistent/.env")


def test_settings_from_a_dotenv_file(tmp_path, monkeypatch):
    monkeypatch.delenv("HOMEOACT_LOG_LEVEL")
    dotenv = tmp_path / ".env"
    dotenv.write_text("HOMEOACT_GRID=12\nHOMEOACT_LOG_LEVEL=DEBUG\nUNRELATED=1\n")

    settings = Settings.from_env(dotenv_path=str(dotenv))

    assert settings.grid == 12
    assert settings.log_level == "DEBUG"

    monkeypatch.chdir(tmp_path)

    assert Settings().grid == 12

    monkeypatch.setenv("HOMEOACT_GRID", "30")

    assert Settings().grid == 30
    assert Settings(grid=7).grid == 7


def test_twist_fixture_needs_blocks():
    fixture = OracleFixture(model="a-minus", twists=((0, 1),))

    with pytest.raises(ValidationFailure, match="blocks"):
        fixture.oracle()

    assert OracleFixture(model="phi", blocks=GapSet.boundary().blocks, signs=(1,)).gapset() == GapSet.boundary()
