import json
import subprocess
import sys
from fractions import Fraction

import pytest

from capcalc.cli import emit_rf_curve, read_rf_curve, run, write_rf_curve


def test_weights(capsys):
    assert run(["weights", "25/9"]) == 0
    out = capsys.readouterr().out
    assert "1^x2, 7/9^x1, 2/9^x3, 1/9^x2" in out
    assert "length 8" in out


def test_class_check(capsys):
    assert run(["class", "check", "6", "3", "3,2^x7"]) == 0
    out = capsys.readouterr().out
    assert "diophantine: True" in out
    assert "exceptional: yes" in out


def test_mu(capsys):
    assert run(["mu", "--class", "6,3;3,2^x7", "--a", "8", "--b", "2"]) == 0
    out = capsys.readouterr().out
    assert "mu = 17/12" in out
    assert "obstructive: True" in out


def test_rf_and_cb8(capsys):
    assert run(["rf", "--b", "8/5"]) == 0
    assert "19220/2401" in capsys.readouterr().out
    assert run(["cb8", "--b", "3/2"]) == 0
    assert "49/30" in capsys.readouterr().out


def test_rf_excluded_point_is_error(capsys):
    assert run(["rf", "--b", "16/9"]) == 1
    assert "unknown" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["rf", "--b", "abc"],
        ["rf"],
        ["weights", "1/2"],
        ["mu", "--class", "nonsense", "--a", "8", "--b", "2"],
        ["rf-curve", "--from", "2", "--to", "3/2", "--steps", "4"],
        ["verify", "--b-list", "3"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv) == 1


def test_reduce(capsys):
    assert run(["reduce", "--a", "9", "--b", "2", "--trace"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("success (5 moves)")
    assert "defect 0" in out


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_rf_curve_roundtrip(tmp_path, fmt, capsys):
    path = tmp_path / f"curve.{fmt}"
    assert run(["rf-curve", "--from", "31/25", "--to", "2", "--steps", "76", "--format", fmt, "--out", str(path)]) == 0
    text = path.read_text(encoding="utf-8")
    assert "capcalc.rf-curve/1" in text
    rows = read_rf_curve(text)
    assert rows == emit_rf_curve(Fraction(31, 25), Fraction(2), 76)
    assert rows[-1].rf == Fraction(289, 36)


def test_rf_curve_marks_excluded_points():
    rows = emit_rf_curve(Fraction(16, 9), Fraction(2), 2)
    assert rows[0].rf is None and rows[0].cls == "unknown"
    text = write_rf_curve(rows, "csv")
    assert "unknown" in text
    assert read_rf_curve(text) == rows


def test_search_output_and_exit(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["search", "--qmax", "4", "--emax", "6", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["schema_version"] == "capcalc.search/1"
    assert data["obstructive_found"] == []


def test_verify_output(tmp_path, capsys):
    out = tmp_path / "verify.json"
    assert run(["verify", "--a-from", "9", "--a-to", "10", "--b-list", "1,2", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["schema_version"] == "capcalc.verify/1"
    assert data["all_success"] is True


def test_verify_failure_exit_2(capsys):
    # Below RF(8/5) the reduction cannot succeed.
    assert run(["verify", "--a-from", "8001/1000", "--a-to", "8001/1000", "--b-list", "8/5"]) == 2


def test_jobs_env_fallback(monkeypatch):
    from capcalc.cli import build_parser

    monkeypatch.setenv("CAPCALC_JOBS", "3")
    args = build_parser().parse_args(["search"])
    assert args.jobs == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "capcalc", "rf", "--b", "3/2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "2401/300" in proc.stdout


def test_rf_curve_small_cases():
    assert len(emit_rf_curve("3/2", "2", 1)) == 2
    rows = emit_rf_curve(Fraction(36, 25), Fraction(38, 25), 2)
    assert rows[0].cls == "unknown" and rows[0].rf is None
    assert [r.b for r in rows] == sorted(r.b for r in rows)
