"""Command-line front end."""
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from edsaffine.cli import main, render, run

FIX = "tests/fixtures"
SCHEMA = json.loads(resources.files("edsaffine").joinpath("report.schema.json").read_text())


def call(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def call_json(argv, capsys):
    code, out = call(argv + ["--json"], capsys)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_classify_constant(capsys):
    code, rep = call_json(["classify", "--ode", "y' = 3"], capsys)
    assert code == 0
    assert rep["result"]["case"] == "I.1" and rep["result"]["dimension"] == 5
    assert rep["command"][:2] == ["classify", "--ode"]


def test_symmetries_reports_path(capsys):
    code, rep = call_json(["symmetries", "--ode", "y' = y/x"], capsys)
    assert code == 0 and rep["result"]["dimension"] == 4 and rep["result"]["path"] == "both"


def test_transform_identity(capsys):
    code, rep = call_json(["transform", "--g", "1", "0", "0", "1", "0", "0", "--ode", "y' = x"], capsys)
    assert code == 0 and rep["result"]["transformed"] == "y' = x"


def test_transform_shear(capsys):
    code, rep = call_json(["transform", "--g", "1", "0", "-3", "1", "0", "0", "--ode", "y' = 3"], capsys)
    assert rep["result"]["transformed"] == "y' = 0"


def test_transform_vertical_image_fails(capsys):
    code, rep = call_json(["transform", "--g", "0", "1", "1", "0", "0", "0", "--ode", "y' = 0"], capsys)
    assert code == 1 and rep["status"] == "failed"


def test_cauchy_fixture(capsys):
    code, rep = call_json(["cauchy", "--system", f"{FIX}/example_a.txt"], capsys)
    assert code == 0 and rep["result"]["cauchy_rank"] == 3
    assert rep["assumptions"]  # pivots are reported


def test_integrals_fixture(capsys):
    code, rep = call_json(["integrals", "--system", f"{FIX}/example_a.txt"], capsys)
    assert code == 0
    assert sorted(rep["result"]["integrals"]) == ["p", "x + 2*p*y", "z + p*x + y*p^2"]


@pytest.mark.parametrize("target", ["structure-equations", "example-a", "example-b"])
def test_verify_targets(target, capsys):
    code, rep = call_json(["verify", target], capsys)
    assert code == 0 and rep["result"]["ok"]


def test_verify_example_a_text(capsys):
    code, out = call(["verify", "example-a"], capsys)
    assert code == 0
    assert "theta_identity" in out and "z + p*x + y*p^2" in out


def test_verify_table(capsys):
    code, rep = call_json(["verify-table", "--row", "3", "--F", "s^2"], capsys)
    assert code == 0 and rep["result"]["ok"] and rep["result"]["method"] == "exact"


def test_parameters(capsys):
    code, rep = call_json(["classify", "--ode", "y' = x^a", "--param", "a=2,3,5,-2"], capsys)
    assert code == 0 and rep["result"]["case"] == "II.2"
    code, rep = call_json(["classify", "--ode", "y' = x^a"], capsys)
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["classify"],
        ["classify", "--ode", "y' = (x"],
        ["classify", "--ode", "z' = x"],
        ["transform", "--g", "1", "2", "2", "4", "0", "0", "--ode", "y' = x"],
        ["transform", "--g", "1", "0", "0", "a", "0", "0", "--ode", "y' = x"],
        ["cauchy", "--system", "no/such/file.txt"],
        ["verify-table", "--row", "9", "--F", "s"],
        ["verify-table", "--row", "1", "--F", "x"],
        ["classify", "--ode", "y' = x", "--param", "oops"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code = main(argv)
    capsys.readouterr()
    assert code == 2


def test_reports_are_byte_identical(capsys):
    argv = ["symmetries", "--ode", "y' = x - (x^2 - 2*y)^(1/2)", "--seed", "5", "--json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_timing_is_opt_in(capsys):
    _, rep = call_json(["classify", "--ode", "y' = x"], capsys)
    assert "timing_seconds" not in rep
    _, rep = call_json(["classify", "--ode", "y' = x", "--timing"], capsys)
    assert rep["timing_seconds"] >= 0


def test_json_round_trips():
    code, rep = run(["classify", "--ode", "y' = y/x + x", "--json"])
    out, _ = render(rep)
    assert json.loads(json.dumps(json.loads(out))) == json.loads(out)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "edsaffine", "classify", "--ode", "y' = x", "--json"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["case"] == "II.1"
