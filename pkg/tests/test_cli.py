import csv
import io
import json
import subprocess
import sys

import pytest

from normalmonoid import cli

NORMAL = "u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5"
NOT_NORMAL = "u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2"
QUADRIC = "u1 u2 u3 | u1 u2 = u3^2"


def run(argv, capsys):
    code = cli.main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_analyze_text(capsys):
    code, out, _ = run(["analyze", NORMAL], capsys)
    assert code == cli.EXIT_OK
    assert "NormalPositive" in out and "class group: Z x Z/2" in out


def test_analyze_not_normal_json(capsys):
    code, out, _ = run(["analyze", "--json", NOT_NORMAL], capsys)
    assert code == cli.EXIT_OK
    d = json.loads(out)
    assert d["verdict"]["status"] == "NotNormal"
    assert d["verdict"]["failed_condition"] == "3d"
    assert d["class_group"] is None


def test_analyze_file_input(tmp_path, capsys):
    f = tmp_path / "quad.txt"
    f.write_text("# the quadric cone\ngens: u1 u2 u3\nrel: u1 u2 = u3^2\n")
    code, out, _ = run(["analyze", str(f)], capsys)
    assert code == 0 and "Z/2" in out


@pytest.mark.parametrize("arg", ["a b | a = q", "gens: a a\n", "nonexistent-file"])
def test_parse_errors_exit_2(arg, capsys):
    code, out, err = run(["analyze", arg], capsys)
    assert code == cli.EXIT_PARSE
    assert err.startswith("error:")
    assert out == ""


def test_report_json_round_trip():
    rep = cli.verify(NORMAL, {"cancel", "normal", "class"}, 4)
    assert cli.AnalysisReport.from_json(rep.to_json()) == rep
    assert not rep.disagreements
    rep, *_ = cli.analyze(NOT_NORMAL)
    assert cli.AnalysisReport.from_json(rep.to_json()) == rep


def test_verify_quadric_three_routes(capsys):
    code, out, _ = run(["verify", "--json", QUADRIC], capsys)
    assert code == cli.EXIT_OK
    d = json.loads(out)
    assert d["class_group"]["formula"] == d["class_group"]["matrix_route"]
    assert d["oracle"]["class"]["class_group"] == d["class_group"]["formula"]
    assert all(m["ok"] for m in d["oracle"]["class"]["matches"])


def test_verify_non_cancellative(capsys):
    code, out, _ = run(["verify", "--json", "--oracle", "cancel", "--degree-bound", "2",
                        "a b | a^2 = a b"], capsys)
    assert code == cli.EXIT_OK
    d = json.loads(out)
    assert d["verdict"]["status"] == "NotCancellative"
    assert d["oracle"]["cancel"]["witness"]


def test_verify_dimension_guard_exit_4(capsys):
    text = "a b c d e f g h | a b c d = e f g h^2"
    code, out, err = run(["verify", "--oracle", "normal", text], capsys)
    assert code == cli.EXIT_RESOURCE
    assert "DimensionTooLarge" in err
    assert "verdict:" in out  # the partial report is still printed


def test_bad_flag_values():
    with pytest.raises(SystemExit):
        cli.main(["verify", "--degree-bound", "0", QUADRIC])
    with pytest.raises(SystemExit):
        cli.main(["sweep", "--family", "two", "--max-n", "99"])


def test_sweep_csv(tmp_path, capsys):
    target = tmp_path / "s.csv"
    code, _, err = run(["sweep", "--family", "one", "--max-n", "3", "--max-exp", "2",
                        "--out", str(target)], capsys)
    assert code == cli.EXIT_OK
    text = target.read_text()
    header, body = text.split("\n", 1)
    assert header.startswith("# normalmonoid sweep schema v1")
    rows = list(csv.DictReader(io.StringIO(body)))
    assert rows and all(r["agree"] in ("1", "True", "true") for r in rows)
    assert "0 disagreeing" in err
    # deterministic output
    run(["sweep", "--family", "one", "--max-n", "3", "--max-exp", "2",
         "--out", str(tmp_path / "t.csv")], capsys)
    assert (tmp_path / "t.csv").read_text() == text


def test_stdin_via_module():
    res = subprocess.run([sys.executable, "-m", "normalmonoid", "analyze", "-"],
                         input=QUADRIC, capture_output=True, text=True, timeout=60)
    assert res.returncode == 0
    assert "Z/2" in res.stdout
