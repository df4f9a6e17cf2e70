from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from pretzelrep.cli import main, parse_slope
from pretzelrep.errors import InvalidInput
from pretzelrep.report import (
    PATH_COLUMNS,
    AnalysisReport,
    analyze,
    dumps,
    sample_path,
    verify_suite,
)
from pretzelrep.trace_locus import PretzelKnot, ToleranceConfig, locus_invariants_hold, solve_locus, theta0

P111 = PretzelKnot(1, 1, 1)
P333 = PretzelKnot(3, 3, 3)
P357 = PretzelKnot(3, 5, 7)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- analysis --------------------------------------------------------------


def test_analyze_trefoil():
    rep = analyze(P111)
    assert rep.cover_threshold == 7
    assert rep.r1_star == pytest.approx(3.0, abs=1e-9)
    assert rep.surgery_interval == "(-inf, 1)"
    assert rep.suite_passed


def test_analyze_symmetric():
    rep = analyze(P333)
    assert rep.limit_T == 27 / 7
    assert rep.cover_threshold == 17
    assert rep.cover_threshold > math.pi / rep.theta0
    assert all(v <= 1e-9 for v in rep.residual_summary.values())


def test_analysis_json_round_trip():
    rep = analyze(P357)
    back = AnalysisReport.from_dict(json.loads(dumps(rep.to_dict())))
    assert back == rep


def test_analyze_rejects_even():
    with pytest.raises(InvalidInput):
        analyze(PretzelKnot(2, 3, 3))


# --- path sampling ---------------------------------------------------------


def test_path_trefoil_rows():
    sample = sample_path(P111, 100)
    assert len(sample.rows) == 100
    for r1, T in zip(sample.column("r1"), sample.column("T")):
        assert abs(T - (r1 + 1)) <= 1e-10


def test_path_endpoints(knot):
    sample = sample_path(knot, 2)
    assert sample.column("phi")[0] < 0.05
    assert sample.column("phi")[-1] > math.pi - 0.05


def test_path_rows_increasing_and_valid(knot):
    sample = sample_path(knot, 40)
    r1 = sample.column("r1")
    assert all(a < b for a, b in zip(r1, r1[1:]))
    for r in r1:
        assert locus_invariants_hold(solve_locus(knot, r))
    # clustered at both ends
    assert r1[1] - r1[0] < r1[20] - r1[19]
    assert r1[-1] - r1[-2] < r1[20] - r1[19]


@pytest.mark.parametrize("count", [1, 0, -3, 2.5])
def test_path_rejects_small_count(count):
    with pytest.raises(InvalidInput):
        sample_path(P111, count)


def test_csv_header_and_values():
    text = sample_path(P357, 5).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(PATH_COLUMNS)
    assert ",".join(rows[0]) == "r1,r2,r3,gamma,delta,T,theta,phi,slope_neg,slope_pos"
    assert len(rows) == 6
    first = [float(x) for x in rows[1]]
    assert first == list(sample_path(P357, 5).rows[0])


# --- verification suite ----------------------------------------------------


def test_verify_suite_passes():
    suite = verify_suite(P357, 200, 42)
    assert suite.passed, [c.to_dict() for c in suite.checks if not c.passed]
    names = {c.name for c in suite.checks}
    assert {"chebyshev.identity", "locus.triangle", "representation.relations", "holonomy.eigen_equation"} <= names


def test_verify_suite_reports_failures_with_tight_tolerance():
    cfg = ToleranceConfig(residual_tol=1e-20)
    suite = verify_suite(P333, 20, 1, cfg)
    assert not suite.passed
    failed = [c for c in suite.checks if not c.passed]
    assert failed and all(c.worst is not None and c.worst > 1e-20 for c in failed)


def test_verify_suite_single_sample_deterministic():
    a = dumps(verify_suite(P111, 1, 3).to_dict())
    b = dumps(verify_suite(P111, 1, 3).to_dict())
    assert a == b
    assert json.loads(a)["samples"] == 1


def test_verify_suite_rejects_zero_samples():
    with pytest.raises(InvalidInput):
        verify_suite(P111, 0, 0)


def test_dumps_sanitizes_non_finite():
    text = dumps({"x": float("inf"), "y": float("nan"), "z": 1j, "w": (1, 2)})
    assert json.loads(text) == {"x": None, "y": None, "z": [0.0, 1.0], "w": [1, 2]}


def test_dumps_floats_round_trip():
    x = theta0(P333)
    assert json.loads(dumps({"x": x}))["x"] == x


# --- CLI -------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, pair",
    [("1/2", (1, 2)), ("-3/7", (-3, 7)), ("4/-6", (-2, 3)), ("-5", (-5, 1)), (" 9 / 10 ", (9, 10))],
)
def test_parse_slope(text, pair):
    assert parse_slope(text) == pair


@pytest.mark.parametrize("text", ["0.5", "1/0", "a/b", "1/2/3", "", "1e3", "1/2.0"])
def test_parse_slope_rejects(text):
    with pytest.raises(InvalidInput):
        parse_slope(text)


def test_cli_envelope_keys(capsys):
    code, out, _ = run(capsys, "slope", "--knot", "3,3,5", "--slope", "1/2")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"knot", "query", "result", "residuals", "config", "version"}
    assert payload["residuals"]["phase_residual"] <= 1e-9
    assert payload["config"]["residual_tol"] == 1e-9
    assert payload["query"] == {"command": "slope", "slope": "1/2"}


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--knot", "3,3,5"],
        ["locus", "--knot", "3,3,3", "--r1", "2.05"],
        ["locus", "--knot", "3,3,5", "--r1", "3.5"],
        ["cover", "--knot", "1,1,1", "--n", "7"],
        ["path", "--knot", "3,5,7", "--samples", "4"],
        ["verify", "--knot", "1,1,1", "--samples", "5", "--seed", "1"],
    ],
)
def test_cli_success(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert set(json.loads(out)) == {"knot", "query", "result", "residuals", "config", "version"}


@pytest.mark.parametrize("slope", ["-1/2", "-5", "-269/100"])
def test_cli_negative_slope(capsys, slope):
    code, out, _ = run(capsys, "slope", "--knot", "3,3,3", "--slope", slope)
    assert code == 0
    assert json.loads(out)["result"]["sign"] == 1


def test_cli_path_csv(capsys):
    code, out, _ = run(capsys, "path", "--knot", "3,3,5", "--samples", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "r1,r2,r3,gamma,delta,T,theta,phi,slope_neg,slope_pos"
    assert len(out.splitlines()) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--knot", "2,3,3"],
        ["analyze", "--knot", "-3,3,3"],
        ["analyze", "--knot", "1,3,3"],
        ["analyze", "--knot", "3,3"],
        ["slope", "--knot", "3,3,3", "--slope", "0.5"],
        ["slope", "--knot", "3,3,3", "--slope", "3/2"],
        ["slope", "--knot", "3,3,3", "--slope", "0"],
        ["slope", "--knot", "3,3,3", "--slope", "x"],
        ["cover", "--knot", "3,3,3", "--n", "16"],
        ["locus", "--knot", "3,3,3", "--r1", "1.5"],
        ["locus", "--knot", "3,3,3", "--r1", "2.5", "--format", "csv"],
        ["path", "--knot", "3,3,3", "--samples", "1"],
        ["verify", "--knot", "3,3,3", "--tol-residual", "-1"],
    ],
)
def test_cli_invalid_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "invalid input" in err


def test_cli_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["slope", "--knot", "3,3,3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_cli_failure_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "--knot", "3,3,3", "--samples", "3", "--tol-residual", "1e-20")
    assert code == 1
    assert json.loads(out)["result"]["passed"] is False


def test_cli_output_file(tmp_path, capsys):
    target = tmp_path / "cover.json"
    code, out, _ = run(capsys, "cover", "--knot", "3,3,3", "--n", "17", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["target"] == {"n": 17}


def test_console_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "pretzelrep.cli", "cover", "--knot", "3,3,5", "--n", "21"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["result"]["passed"] is True
