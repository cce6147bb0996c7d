import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import CURVES
from spaceasym.cli import dump_document, load_asymptotes, main
from spaceasym.exactfield import NumberField

F = Fraction


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def curve_args(name):
    f1, f2 = CURVES[name]
    return ["--f1", f1, "--f2", f2]


def test_project_text(capsys):
    code, out, _ = run(capsys, "project", *curve_args("four_lines"))
    assert code == 0
    assert "h = x1*x2 - x2^2" in out
    assert "coordinate change: none" in out


def test_branches_text(capsys):
    code, out, _ = run(capsys, "branches", *curve_args("four_lines"), "--depth", "1")
    assert code == 0
    assert out.count("branch ") == 4
    assert "r2 = z - 2 - 7/3*z^-1" in out
    assert "r3 = 2*z - 5/3 - 31/27*z^-1" in out


def test_branches_structured(capsys):
    code, out, _ = run(capsys, "branches", *curve_args("cubic_field"), "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    (b,) = doc["branches"]
    assert b["minpoly"] == ["-2/1", "1/1", "-4/1", "1/1"]
    assert b["point"] is None
    assert b["count"] == 3


def test_asymptotes_text_both_methods(capsys):
    code, out, _ = run(capsys, "asymptotes", *curve_args("four_lines"), "--method", "both", "--deterministic")
    assert code == 0
    assert "methods agree" in out
    assert "(t, t - 2, 2*t - 5/3)" in out
    assert out.count("asymptote ") == 4


def test_asymptotes_marks_repaired_form(capsys):
    code, out, _ = run(capsys, "asymptotes", *curve_args("cylinder"), "--method", "both")
    assert code == 0
    assert "reparametrized from the t^4 form" in out


def test_asymptotes_algebraic_output(capsys):
    code, out, _ = run(capsys, "asymptotes", *curve_args("cubic_field"))
    assert code == 0
    assert "m(λ) = λ^3 - 4*λ^2 + λ - 2" in out
    assert "implicit: g1 =" in out


def test_structured_round_trip(capsys):
    code, out, _ = run(capsys, "asymptotes", *curve_args("cubic_field"), "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert all(c["passed"] for c in doc["checks"])
    asymptotes = load_asymptotes(out)
    lam = NumberField([-2, 1, -4, 1]).gen
    assert asymptotes[0].q3 == (0, -lam**2 / 2 + 3 * lam / 2)
    # dump -> load -> dump is stable
    again = dump_document(json.loads(out))
    assert again + "\n" == out
    assert load_asymptotes(again)[0].components == asymptotes[0].components


def test_rationals_are_strings(capsys):
    code, out, _ = run(capsys, "asymptotes", *curve_args("four_lines"), "--format", "structured")
    doc = json.loads(out)
    values = [v for a in doc["asymptotes"] for v in a["q3"]]
    assert "-5/3" in values
    assert all(isinstance(v, str) for v in values)


def test_plotdata_csv(capsys):
    code, out, _ = run(capsys, "plotdata", *curve_args("cylinder"), "--samples", "100,1000", "--precision", "12")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "object,z,x1,x2,x3,dist_to_asymptote"
    assert lines[-1].startswith("# skipped ")
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:-1]))))
    assert rows and all(len(r) == 6 for r in rows)
    branch_rows = [r for r in rows if r[0].startswith("branch") and float(r[1]) > 0]
    by_branch = {}
    for r in branch_rows:
        by_branch.setdefault(r[0], []).append(float(r[5]))
    for dists in by_branch.values():
        assert dists == sorted(dists, reverse=True)


def test_plotdata_empty_samples(capsys):
    code, out, _ = run(capsys, "plotdata", *curve_args("four_lines"), "--samples", "")
    assert code == 0
    assert out == "object,z,x1,x2,x3,dist_to_asymptote\n# skipped 0 non-real samples\n"


def test_input_file_and_output_file(tmp_path, capsys):
    src = tmp_path / "curve.txt"
    f1, f2 = CURVES["four_lines"]
    src.write_text(f"# four lines\n{f1}\n{f2}\n", encoding="utf-8")
    dest = tmp_path / "out.txt"
    code, out, _ = run(capsys, "project", "--input", str(src), "--output", str(dest))
    assert code == 0 and out == ""
    assert "h = x1*x2 - x2^2" in dest.read_text(encoding="utf-8")


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "project", "--f1", "x1 x2", "--f2", "x3")
    assert code == 2
    assert err.startswith("parse error: line 1, column 4")


def test_parse_error_in_file_reports_line(tmp_path, capsys):
    src = tmp_path / "bad.txt"
    src.write_text("x1 + x3\n\nx2 +* 1\n", encoding="utf-8")
    code, _, err = run(capsys, "project", "--input", str(src))
    assert code == 2
    assert "line 3" in err


def test_missing_polynomial_is_usage_error(capsys):
    code, _, err = run(capsys, "project", "--f1", "x1")
    assert code == 2


def test_bad_samples_rejected(capsys):
    code, _, err = run(capsys, "plotdata", *curve_args("four_lines"), "--samples", "100,10")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["plotdata", *curve_args("four_lines"), "--samples", "a,b"])


def test_not_a_curve_exit_code(capsys):
    code, _, err = run(capsys, "asymptotes", "--f1", "x1*x3 - x2", "--f2", "x1*x3 - x2")
    assert code == 3
    assert err.startswith("error: NotACurve")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spaceasym", "project", *curve_args("four_lines")],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "fp = " in proc.stdout
