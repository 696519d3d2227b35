from __future__ import annotations

import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from pvilab.cli import Report, emit_report, jsonable, run_command


def run(*argv: str) -> tuple[int, dict | None]:
    buf = io.BytesIO()
    code = run_command(list(argv), buf)
    raw = buf.getvalue()
    return code, (json.loads(raw) if raw else None)


def test_verify_pencil_passes():
    code, rep = run("verify-pvi", "--pencil")
    assert code == 0 and rep["pass"] is True
    assert rep["command"] == "verify-pvi"


def test_verify_both_variants():
    code, rep = run("verify-pvi", "--pencil", "--variant", "both")
    assert code == 0
    assert rep["data"]["zero_variants"] == ["standard"]
    assert rep["data"]["printed"]["zero"] is False


def test_failing_check_exits_one():
    code, rep = run("verify-pvi", "--alpha", "0,0,0,0")
    assert code == 1 and rep["pass"] is False


def test_eq2_default_alpha():
    code, rep = run("verify-pvi", "--solution", "eq2")
    assert code == 0 and rep["inputs"]["alpha"] == "(1/8, 1/2, 0, 0)"


def test_usage_error_exits_two():
    assert run("verify-pvi", "--alpha", "1,2")[0] == 2
    assert run("no-such-command")[0] == 2


def test_input_error_exits_two():
    # 2a - 1 = 0 makes the family degenerate
    assert run("bracket-check", "--at-a", "1/2")[0] == 2


def test_bracket_check_values():
    code, rep = run("bracket-check")
    assert code == 0
    assert rep["data"]["terms_at_a"] == ["49/15", "-49/40", "-49/24"]


def test_derive_pf_matches():
    code, rep = run("derive-pf", "--form", "second", "--match-lemma")
    assert code == 0 and rep["pass"]


def test_scheme_and_apparent():
    assert run("scheme", "--kind", "second")[0] == 0
    assert run("apparent-test", "--kind", "second", "--point", "0", "--expect", "logarithmic")[0] == 0
    assert run("apparent-test", "--kind", "second", "--point", "0", "--expect", "apparent")[0] == 1


def test_extract_params_report():
    code, rep = run("extract-params", "--kind", "first")
    assert code == 0
    text = json.dumps(rep)
    assert "1/2" in text


def test_period_report():
    code, rep = run("period", "--a", "3", "--s", "0.5")
    assert code == 0
    assert rep["data"]["value"].startswith("3.71291592487")


def test_pf_residual_negative_control_fails():
    code, rep = run("pf-residual", "--form", "first", "--against", "second", "--grid", "0.3,0.6")
    assert code == 1


def test_pretty_flag_either_position():
    a = io.BytesIO()
    b = io.BytesIO()
    assert run_command(["--pretty", "bracket-check"], a) == 0
    assert run_command(["bracket-check", "--pretty"], b) == 0
    assert a.getvalue() == b.getvalue() and b"\n  " in a.getvalue()


def test_deterministic_output():
    outs = []
    for _ in range(2):
        buf = io.BytesIO()
        run_command(["garnier-check", "--samples", "30", "--random-thetas", "2", "--seed", "4"], buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


def test_empty_report_shape():
    obj = json.loads(emit_report(Report("noop")))
    assert obj == {
        "command": "noop", "inputs": {}, "pass": True, "checks": [], "notes": [],
        "data": {}, "seed": None, "version": obj["version"],
    }


def test_rationals_round_trip_as_text():
    assert jsonable(Fraction(-27, 5)) == "-27/5"
    assert Fraction(jsonable(Fraction(-27, 5))) == Fraction(-27, 5)


def test_float_seventeen_digits():
    assert jsonable(0.1) == "0.10000000000000001"
    assert float(jsonable(2 / 3)) == 2 / 3


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pvilab.cli", "bracket-check"], capture_output=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
