import json
import subprocess
import sys

import pytest

from pisotrec import DecisionReport
from pisotrec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decide_verbose(capsys):
    code, out, _ = run(capsys, "decide", "--x", "4", "--y", "7", "--r", "1/2", "--max-order", "12",
                       "--print", "60", "--check", "50000")
    assert code == 0
    d = json.loads(out)
    assert d["verdict"] == "Proved" and d["recurrence"][1] == [2, -1, 1]
    assert [int(t) for t in d["terms"][:11]] == [4, 7, 12, 21, 37, 65, 114, 200, 351, 616, 1081]
    assert len(d["terms"]) == 60
    # the report round-trips through the serializer bit-identically
    assert DecisionReport.from_json(out).to_json() + "\n" == out


def test_decide_disproved(capsys):
    code, out, _ = run(capsys, "decide", "--x", "10", "--y", "219", "--r", "1/2", "--max-order", "12",
                       "--check", "2000")
    assert code == 0
    d = json.loads(out)
    assert d["verdict"] == "Disproved" and d["first_failure"] == 1403


def test_decide_given_recurrence(capsys):
    code, out, _ = run(capsys, "decide", "--x", "5", "--y", "17", "--recurrence", "[[5,17],[4,-2]]")
    assert code == 0 and json.loads(out)["verdict"] == "Proved"


@pytest.mark.parametrize("argv", [
    ["decide", "--x", "4", "--y", "3"],
    ["decide", "--x", "4", "--y", "7", "--r", "a/b"],
    ["decide", "--x", "4"],
    ["decide", "--x", "4", "--y", "7", "--recurrence", "[[1],[0]]"],
    ["generate", "--x", "4", "--y", "7", "--s", "2"],
    ["bogus"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_generate_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--x", "4", "--y", "7", "--print", "5")
    assert code == 0 and out == "0 4\n1 7\n2 12\n3 21\n4 37\n"
    path = tmp_path / "e.json"
    assert main(["generate", "--x", "4", "--y", "7", "--print", "5", "--format", "json", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["terms"][:3] == ["4", "7", "12"]


def test_guess_from_bfile(capsys, tmp_path):
    path = tmp_path / "b.txt"
    main(["generate", "--x", "10", "--y", "219", "--print", "60", "--out", str(path)])
    code, out, _ = run(capsys, "guess", "--x", "1", "--bfile", str(path))
    assert code == 0
    assert json.loads(out)["recurrence"] == [[10, 219, 4796, 105030], [22, -3, 18, -11]]


def test_missing_file_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "guess", "--x", "1", "--bfile", str(tmp_path / "none"))
    assert code == 1 and "pisotrec" in err


def test_families_and_scan(capsys, tmp_path):
    code, out, _ = run(capsys, "families", "--x", "5", "--format", "csv")
    assert code == 0 and out.startswith("template,k,y,status,verdict")
    out_csv = tmp_path / "s.csv"
    code, _, _ = run(capsys, "scan", "--x", "4", "--y", "5..12", "--out", str(out_csv))
    assert code == 0 and len(out_csv.read_text().splitlines()) == 9


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pisotrec.cli", "decide", "--x", "5", "--y", "17"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "Proved"


def test_huge_terms_print(capsys):
    code, out, _ = run(capsys, "generate", "--x", "30", "--y", "989", "--print", "3000")
    assert code == 0 and len(out.splitlines()[-1]) > 4300
