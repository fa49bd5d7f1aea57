"""Tests for the command line surface and its exit codes."""

from logging import DEBUG, WARNING, getLogger

import pytest

from scaling_witness import __version__
from scaling_witness.business.exceptions import NumericalFailureError
from scaling_witness.business.search import coarse_resolution
from scaling_witness.commands import state as state_commands
from scaling_witness.integrations.files import load_report
from scaling_witness.main import run_cli
from scaling_witness.models.scaling import Verdict
from scaling_witness.utils.constants import ExitCode


@pytest.fixture(autouse=True)
def _restore_log_level():
    level = getLogger().level
    yield
    getLogger().setLevel(level)


def test_analyze_vacuum(fixture_path, capsys):
    assert run_cli(["analyze", str(fixture_path("vacuum3")), "--starts", "4"]) == ExitCode.OK
    assert "verdict: not-witnessed" in capsys.readouterr().out


def test_analyze_single_coupling(fixture_path, capsys):
    assert run_cli(["analyze", str(fixture_path("single-coupling-c2-3")), "--starts", "4"]) == ExitCode.WITNESS_FOUND

    output = capsys.readouterr().out
    assert "verdict: entangled-witnessed" in output
    assert "depth: 0.05" in output


def test_scaling_detects_what_ppt_misses(fixture_path, capsys):
    assert run_cli(["ppt", str(fixture_path("c1zero"))]) == ExitCode.OK
    assert "verdict: not-witnessed" in capsys.readouterr().out

    assert run_cli(["analyze", str(fixture_path("c1zero")), "--starts", "4"]) == ExitCode.WITNESS_FOUND


def test_ppt_with_pattern(fixture_path, capsys):
    assert run_cli(["ppt", str(fixture_path("single-coupling-c2-3")), "--pattern=-,+,+"]) == ExitCode.WITNESS_FOUND
    assert "pattern: -1,1,1" in capsys.readouterr().out


def test_ppt_rejects_unknown_signs(fixture_path, caplog):
    assert run_cli(["ppt", str(fixture_path("vacuum3")), "--pattern=+,x,-"]) == ExitCode.INPUT_ERROR
    assert "InvalidPatternError" in caplog.text


def test_validate(fixture_path, capsys):
    assert run_cli(["validate", str(fixture_path("triangle-c3-1-2"))]) == ExitCode.OK

    output = capsys.readouterr().out
    assert "admissible: true" in output
    assert "physical: true" in output


def test_validate_mixed_fixtures(fixture_path, capsys, caplog):
    assert run_cli(["validate", str(fixture_path("mixed-three-mode"))]) == ExitCode.OK
    assert "kind: covariance" in capsys.readouterr().out

    assert run_cli(["validate", str(fixture_path("mixed-four-mode"))]) == ExitCode.INPUT_ERROR
    assert "StateValidationError" in caplog.text


def test_eval(fixture_path, capsys):
    argv = ["eval", str(fixture_path("single-coupling-c2-3")), "--lambda=0.5,-0.5,0.5"]
    assert run_cli(argv) == ExitCode.WITNESS_FOUND

    output = capsys.readouterr().out
    assert "sigma_raw: -0.178125" in output
    assert "minor_4:" in output
    assert "minor_6: -0.178125" in output


def test_eval_with_zero_scaling(fixture_path, capsys):
    assert run_cli(["eval", str(fixture_path("vacuum3")), "--lambda=0.5,0,1"]) == ExitCode.OK

    output = capsys.readouterr().out
    assert "sigma_raw: nan" in output
    assert "regularized_minor_4:" in output
    assert "witnessed: false" in output


@pytest.mark.parametrize("lambdas", ["--lambda=1.5,0,0", "--lambda=0.5,0.5", "--lambda=a,b,c"])
def test_eval_rejects_invalid_scalings(fixture_path, lambdas):
    assert run_cli(["eval", str(fixture_path("vacuum3")), lambdas]) == ExitCode.INPUT_ERROR


def test_scan_to_file(fixture_path, tmp_path):
    out = tmp_path / "slice.csv"
    argv = ["scan", str(fixture_path("single-coupling-c2-3")), "--fix", "1=0.5", "--axes", "2,3", "--grid", "11"]

    assert run_cli([*argv, "--out", str(out)]) == ExitCode.WITNESS_FOUND
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda_2,lambda_3,sigma_raw,sigma_reg"
    assert len(lines) == 122


def test_scan_to_stdout(fixture_path, capsys):
    argv = ["scan", str(fixture_path("vacuum3")), "--fix", "1=1", "--axes", "2,3", "--grid", "5"]
    assert run_cli(argv) == ExitCode.OK
    assert len(capsys.readouterr().out.splitlines()) == 26


@pytest.mark.parametrize(
    "extra",
    [["--fix", "1:0.5", "--axes", "2,3"], ["--fix", "1=0.5", "--axes", "2"], ["--fix", "1=0.5", "--axes", "3,4"]],
)
def test_scan_rejects_bad_plans(fixture_path, extra):
    assert run_cli(["scan", str(fixture_path("vacuum3")), *extra]) == ExitCode.INPUT_ERROR


def test_analyze_json_report(fixture_path, capsys):
    argv = ["analyze", str(fixture_path("vacuum2")), "--starts", "2", "--seed", "5", "--json"]
    assert run_cli(argv) == ExitCode.OK

    report = load_report(capsys.readouterr().out)
    assert report.verdict == Verdict.SEPARABLE
    assert report.parameters.seed == 5
    assert report.parameters.grid == coarse_resolution(2)
    assert report.version == __version__


def test_numerical_failure(fixture_path, monkeypatch, caplog):
    def _fail(*_args: object) -> float:
        raise NumericalFailureError("imaginary residue")

    monkeypatch.setattr(state_commands, "shifted_determinant", _fail)
    argv = ["eval", str(fixture_path("vacuum3")), "--lambda=0.5,0.5,0.5"]

    assert run_cli(argv) == ExitCode.NUMERICAL_FAILURE
    assert "Numerical failure" in caplog.text


@pytest.mark.parametrize(
    "argv",
    [["analyze"], ["analyze", "missing.json"], ["analyze", "x.json", "--bogus"], [], ["--tol", "-1", "validate", "x"]],
)
def test_input_errors(argv):
    assert run_cli(argv) == ExitCode.INPUT_ERROR


def test_verbosity_flags(fixture_path):
    run_cli(["--verbose", "validate", str(fixture_path("vacuum2"))])
    assert getLogger().level == DEBUG

    run_cli(["--quiet", "validate", str(fixture_path("vacuum2"))])
    assert getLogger().level == WARNING


def test_version(capsys):
    assert run_cli(["--version"]) == ExitCode.OK
    assert __version__ in capsys.readouterr().out


def test_analyze_report_records_explicit_grid(fixture_path, capsys):
    argv = ["analyze", str(fixture_path("vacuum2")), "--grid", "5", "--starts", "1", "--json"]
    assert run_cli(argv) == ExitCode.OK
    assert load_report(capsys.readouterr().out).parameters.grid == 5
