"""
CLI Integration Tests

Runs `cartier-lab` through main(argv) and checks exit codes, report
contents and determinism of the written output.
"""

import json

import pytest

from cartier_lab.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Run without CARTIER_* overrides from the environment."""
    for name in ("CARTIER_PRECISION", "CARTIER_FORMAT", "CARTIER_SEED", "CARTIER_WORKERS"):
        monkeypatch.delenv(name, raising=False)


def _run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out, json.loads(out)


# ============================================================================
# Commands
# ============================================================================


def test_zp_class_table(capsys):
    """
    Test the Z/p class table for x_0 at two places.

    Verifies:
    - Exit code 0 for a verified report
    - Schema version and echoed configuration
    - One row per place, in place order
    """
    code, _, data = _run_json(capsys, ["zp", "--ns", "0", "--places", "t+1,t", "--precision", "15"])
    assert code == EXIT_OK
    assert data["schema"] == "1"
    assert data["verified"] is True
    assert data["config"]["precision"] == 15
    (table,) = data["results"]["tables"]
    assert [row["place"] for row in table["rows"]] == ["t", "t+1"]
    assert all(row["class"] == 0 for row in table["rows"])


def test_json_is_byte_identical(capsys):
    """Test that two runs with the same arguments write the same bytes."""
    argv = ["zp", "--ns", "1", "--places-deg", "1", "--precision", "12", "--workers", "2"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second


def test_wound_family(capsys):
    code, _, data = _run_json(
        capsys, ["wound", "--n", "1", "--k", "2", "--places", "t,1/t", "--precision", "10"]
    )
    assert code == EXIT_OK
    statuses = {entry["place"]: entry["status"] for entry in data["results"]["family"]}
    assert statuses == {"t": "NoSolution", "1/t": "Solved"}
    assert data["results"]["difference"]["witness"]["kind"] == "negative_coefficient"


def test_points(capsys):
    code, _, data = _run_json(
        capsys, ["points", "--place", "t", "--xs", "1,t", "--global-search", "1", "--precision", "12"]
    )
    assert code == EXIT_OK
    assert [point["input"] for point in data["results"]["points"]] == ["1", "t"]
    assert len(data["results"]["global"]["points"]) == 3


def test_cert(capsys):
    code, _, data = _run_json(capsys, ["cert", "--pairs", "0:1", "--pmax", "10", "--lmax", "10"])
    assert code == EXIT_OK
    (cert,) = data["results"]["certificates"]
    assert cert["complete"] is True
    assert cert["verified"] is True


def test_selftest(capsys):
    code, _, data = _run_json(capsys, ["selftest", "--only", "gf"])
    assert code == EXIT_OK
    assert data["results"]["passed"] == data["results"]["total"]


def test_csv_format(capsys):
    assert main(["zp", "--ns", "0", "--places", "t", "--format", "csv", "--precision", "10"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "N,place,degree,integral,residue,class,status,bound"
    assert lines[1].startswith("0,t,1,True,0,0,Solved,10")


def test_out_file(tmp_path, capsys):
    path = tmp_path / "cert.json"
    assert main(["cert", "--pairs", "0:1", "--pmax", "3", "--lmax", "3", "--out", str(path)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text(encoding="utf-8"))["command"] == "cert"


def test_text_format(tmp_path):
    path = tmp_path / "cert.txt"
    argv = ["cert", "--pairs", "0:1", "--pmax", "3", "--lmax", "3", "--format", "text", "--out", str(path)]
    assert main(argv) == EXIT_OK
    text = path.read_text(encoding="utf-8")
    assert "x_0 - x_1" in text
    assert "verified" in text


def test_precision_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("CARTIER_PRECISION", "11")
    code, _, data = _run_json(capsys, ["zp", "--ns", "0", "--places", "t"])
    assert code == EXIT_OK
    assert data["config"]["precision"] == 11


# ============================================================================
# Exit codes
# ============================================================================


@pytest.mark.parametrize(
    "argv",
    [
        ["zp", "--p", "4"],
        ["wound", "--n", "0"],
        ["wound", "--n", "2", "--k", "1"],
        ["zp", "--places", "t^2+2"],
        ["cert"],
    ],
)
def test_invalid_parameters(argv, capsys):
    assert main(argv) == EXIT_USAGE
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "UsageError" in captured.err


def test_argument_errors_exit_with_usage():
    with pytest.raises(SystemExit) as info:
        main(["selftest", "--only", "geometry"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["cert", "--pairs", "0-1"])
    assert info.value.code == EXIT_USAGE


def test_computation_error(capsys):
    """Test x = 1/t at [t]: t x^p has a pole, so no point is lifted."""
    assert main(["points", "--place", "t", "--xs", "1/t"]) == EXIT_FAILED
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "PreconditionError" in captured.err


def test_parser_has_every_command():
    parser = build_parser()
    for command in ("zp", "wound", "points", "cert", "selftest"):
        args = parser.parse_args([command])
        assert args.command == command
