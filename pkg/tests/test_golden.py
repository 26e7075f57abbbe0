"""
Golden Report Tests

Each fixture under tests/golden/ holds the argv of one CLI run and the part
of its JSON report that is fixed by the mathematics: statuses, witnesses,
classes, point lists and certificate coverage. Runs are repeated to check
that reports are byte-identical.
"""

import json
from pathlib import Path

import pytest

from cartier_lab import commands
from cartier_lab.algebra.ratfield import RationalFunction
from cartier_lab.main import EXIT_FAILED, EXIT_OK, main
from cartier_lab.obstruction import wound as wound_module
from cartier_lab.obstruction.certificate import nonperiodicity_certificate
from cartier_lab.obstruction.models import WoundPoint

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_FILES = sorted(GOLDEN_DIR.glob("*.json"))


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("CARTIER_PRECISION", "CARTIER_FORMAT", "CARTIER_SEED", "CARTIER_WORKERS"):
        monkeypatch.delenv(name, raising=False)


def _matches(actual, expected, path="$"):
    """Assert that every key and list element in `expected` is reproduced by `actual`."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict), path
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} missing"
            _matches(actual[key], value, f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list), path
        assert len(actual) == len(expected), f"{path}: {len(actual)} != {len(expected)}"
        for i, (a, e) in enumerate(zip(actual, expected)):
            _matches(a, e, f"{path}[{i}]")
    else:
        assert actual == expected, f"{path}: {actual!r} != {expected!r}"


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


# ============================================================================
# Golden fixtures
# ============================================================================


def test_every_command_has_a_fixture():
    assert {path.stem for path in GOLDEN_FILES} == {"zp", "wound", "points", "cert"}


@pytest.mark.parametrize("path", GOLDEN_FILES, ids=lambda path: path.stem)
def test_golden_report(path, capsys):
    """
    Test a report against its golden fixture.

    Verifies:
    - Exit code 0
    - Every fixed field of the fixture is reproduced
    - A second run writes the same bytes
    """
    golden = json.loads(path.read_text(encoding="utf-8"))
    code, first = _run(capsys, golden["argv"])
    assert code == EXIT_OK
    _matches(json.loads(first), golden["expected"])

    _, second = _run(capsys, golden["argv"])
    assert first == second


def test_selftest_is_byte_identical(capsys):
    code, first = _run(capsys, ["selftest"])
    assert code == EXIT_OK
    _, second = _run(capsys, ["selftest"])
    assert first == second


def test_selftest_seed_keeps_verdicts(capsys):
    """Test that `selftest --seed 7` reaches the same verdict for every check as seed 0."""
    _, default = _run(capsys, ["selftest"])
    code, seeded = _run(capsys, ["selftest", "--seed", "7"])
    assert code == EXIT_OK

    def verdicts(text):
        return [(c["name"], c["passed"]) for c in json.loads(text)["results"]["checks"]]

    assert verdicts(default) == verdicts(seeded)
    assert json.loads(seeded)["config"]["seed"] == 7


# ============================================================================
# Unverified reports exit with 1
# ============================================================================


def test_corrupted_wound_witness_fails(monkeypatch, capsys):
    """
    Test a refutation whose witness no longer matches the target.

    Verifies:
    - The report is still written, with verified false
    - Exit code 1
    """
    solve_at_t = wound_module._solve_at_t

    def corrupted(*args):
        outcome = solve_at_t(*args)
        return outcome.model_copy(
            update={"witness": outcome.witness.model_copy(update={"value": "corrupt"})}
        )

    monkeypatch.setattr(wound_module, "_solve_at_t", corrupted)
    code, out = _run(capsys, ["wound", "--n", "1", "--places", "t,1/t", "--precision", "10"])
    assert code == EXIT_FAILED
    data = json.loads(out)
    assert data["verified"] is False
    at_t, at_infinity = data["results"]["family"]
    assert at_t["status"] == "NoSolution" and at_t["verified"] is False
    assert at_infinity["verified"] is True


def test_corrupted_zp_certificate_fails(monkeypatch, capsys):
    """Test that a certificate with a tampered refutation makes the zp report unverified."""

    def tampered(p, N, K, Pmax, Lmax):
        cert = nonperiodicity_certificate(p, N, K, Pmax, Lmax)
        first = cert.refutations[0]
        bad = first.model_copy(update={"total": (first.total + 1) % p})
        return cert.model_copy(update={"refutations": [bad, *cert.refutations[1:]]})

    monkeypatch.setattr(commands, "nonperiodicity_certificate", tampered)
    argv = [
        "zp", "--ns", "0", "--places", "t", "--pairs", "0:1",
        "--pmax", "3", "--lmax", "3", "--degree", "1", "--precision", "10",
    ]
    code, out = _run(capsys, argv)
    assert code == EXIT_FAILED
    data = json.loads(out)
    assert data["verified"] is False
    assert data["results"]["certificates"][0]["verified"] is False


def test_off_curve_local_point_fails(monkeypatch, capsys):
    """Test that a lifted point which does not satisfy t x^p = y^p - y is reported unverified."""

    lift = commands.wound_point_from_rational

    def shifted(x, place, M):
        point = lift(x, place, M)
        return WoundPoint(x=point.x, y=point.y + 1, place=point.place, precision=point.precision)

    monkeypatch.setattr(commands, "wound_point_from_rational", shifted)
    code, out = _run(capsys, ["points", "--place", "t", "--xs", "1", "--precision", "8"])
    assert code == EXIT_FAILED
    assert json.loads(out)["verified"] is False


def test_off_curve_global_point_fails(monkeypatch, capsys):

    def search(field, D):
        return [(RationalFunction.zero(field), RationalFunction.t(field))]

    monkeypatch.setattr(commands, "wound_global_search", search)
    code, out = _run(capsys, ["points", "--global-search", "0"])
    assert code == EXIT_FAILED
    assert json.loads(out)["verified"] is False
