import json
import subprocess
import sys
from fractions import Fraction

import pytest

from jacinv.cli import main
from jacinv.textformat import parse_map


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invert_shear(capsys, write):
    path = write("f.txt", "u1 = x1 + x2^2\nu2 = x2\n")
    code, out, _ = run(capsys, "invert", path)
    assert code == 0
    assert "x1 = u1 - u2^2" in out
    assert "x2 = u2" in out
    assert "certified, degree 2" in out


def test_invert_json_matches_text(capsys, write):
    path = write("f.txt", "u1 = x1 + 1/2 x2^2 + x2^3\nu2 = 3 x2\n")
    _, text, _ = run(capsys, "invert", path)
    code, out, _ = run(capsys, "invert", path, "--json")
    assert code == 0
    data = json.loads(out)
    run0 = data["runs"][0]
    assert run0["status"] == "certified"
    assert run0["text"] in text
    coeffs = [Fraction(t["coefficient"]) for comp in run0["inverse"] for t in comp]
    assert Fraction(-1, 18) in coeffs
    # the JSON text and the printed inverse describe the same map
    assert parse_map(run0["text"]).map == parse_map(text).map


def test_invert_both_methods_and_residuum(capsys, write):
    path = write("f.txt", "u1 = x1 + x2^2\nu2 = x2 + x1^2 + 2 x1 x2^2 + x2^4\n")
    code, out, _ = run(capsys, "invert", path, "--method", "both", "--emit-residuum")
    assert code == 0
    assert "methods agree" in out
    assert "# residuum, degree 2" in out
    code, out, _ = run(capsys, "invert", path, "--method", "both", "--emit-residuum", "--json")
    data = json.loads(out)
    assert data["agree"] and [r["method"] for r in data["runs"]] == ["block", "oracle"]
    assert "residuum" in data["runs"][0]


def test_invert_cap_reached_exits_1(capsys, write):
    path = write("f.txt", "u1 = x1 + x2^2\nu2 = x2 + x1^2 + 2 x1 x2^2 + x2^4\n")
    code, out, _ = run(capsys, "invert", path, "--cap", "3")
    assert code == 1
    assert "cap_reached" in out


def test_invert_nonconstant_jacobian_exits_1(capsys, write):
    path = write("f.txt", "u1 = x1 + x1^2\nu2 = x2\n")
    code, _, err = run(capsys, "invert", path)
    assert code == 1
    assert "not constant" in err


def test_check(capsys, write):
    path = write("f.txt", "u1 = x1 + x1^2\nu2 = x2\n")
    code, out, _ = run(capsys, "check", path)
    assert code == 1
    assert "M = 1" in out and "x1: 2" in out
    code, out, _ = run(capsys, "check", path, "--json")
    data = json.loads(out)
    assert data["violations"] == [{"exponent": [1, 0], "value": "2"}]
    good = write("g.txt", "u1 = x1 + x2^2\nu2 = x2\n")
    code, out, _ = run(capsys, "check", good)
    assert code == 0 and "violations: none" in out


def test_check_singular(capsys, write):
    path = write("f.txt", "u1 = x2^2\nu2 = x2\n")
    code, out, _ = run(capsys, "check", path)
    assert code == 1 and "M = 0" in out


def test_verify(capsys, write):
    f = write("f.txt", "u1 = x1 + x2^2\nu2 = x2\n")
    g = write("g.txt", "x1 = u1 - u2^2\nx2 = u2\n")
    bad = write("b.txt", "x1 = u1 + u2^2\nx2 = u2\n")
    assert run(capsys, "verify", f, g)[0] == 0
    code, out, _ = run(capsys, "verify", f, bad, "--json")
    assert code == 1 and json.loads(out)["inverse"] is False


def test_detpattern(capsys):
    code, out, _ = run(capsys, "detpattern", "--n", "2", "--max-degree", "5")
    assert code == 0
    powers = [int(line.split()[2]) for line in out.splitlines()[1:6]]
    assert powers == [1, 3, 6, 10, 15]
    code, out, _ = run(capsys, "detpattern", "--n", "3", "--max-degree", "5", "--json")
    rows = json.loads(out)["rows"]
    assert [r["power"] for r in rows] == [1, 4, 10, 20, 35]
    assert [r["size"] for r in rows] == [3, 6, 10, 15, 21]


def test_blocks(capsys, write):
    lin = write("l.txt", "u1 = 2 x1 + x2\nu2 = x1 + x2\n")
    code, out, _ = run(capsys, "blocks", "--n", "2", "--degree", "2", "--linear", lin, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["U"] == [["4", "4", "1"], ["2", "3", "1"], ["1", "2", "1"]]
    assert data["det"] == "1"
    code, out, _ = run(capsys, "blocks", "--n", "3", "--degree", "2")
    assert code == 0 and "size 6" in out
    nonlin = write("n.txt", "u1 = x1 + x2^2\nu2 = x2\n")
    assert run(capsys, "blocks", "--n", "2", "--degree", "2", "--linear", nonlin)[0] == 2
    sing = write("s.txt", "u1 = x1 + x2\nu2 = x1 + x2\n")
    assert run(capsys, "blocks", "--n", "2", "--degree", "2", "--linear", sing)[0] == 1


@pytest.mark.parametrize("family, extra", [("tame", ["--n", "3"]), ("bcw", ["--n", "4"]), ("sec42", ["--degree", "4"])])
def test_gen_round_trip(capsys, tmp_path, family, extra):
    inv = str(tmp_path / "g.txt")
    code, out, _ = run(capsys, "gen", family, "--seed", "5", "--inverse-out", inv, *extra)
    assert code == 0
    f = tmp_path / "f.txt"
    f.write_text(out)
    assert run(capsys, "verify", str(f), inv)[0] == 0
    code, out, _ = run(capsys, "invert", str(f), "--json")
    assert code == 0
    got = parse_map(json.loads(out)["runs"][0]["text"]).map
    assert got == parse_map(open(inv).read()).map


def test_usage_errors_exit_2(capsys, write, tmp_path):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.txt"))[0] == 2
    assert run(capsys, "detpattern", "--n", "0", "--max-degree", "3")[0] == 2
    path = write("f.txt", "u1 = x1 + x2^2\nu2 = x2\n")
    assert run(capsys, "invert", path, "--cap", "0")[0] == 2


def test_parse_error_reports_file_line_and_column(capsys, write):
    path = write("f.txt", "u1 = x1\nu2 = x2 + 7\n")
    code, _, err = run(capsys, "check", path)
    assert code == 2
    assert f"{path}:2:1:" in err and "constant term" in err


def test_module_entry_point(write):
    path = write("f.txt", "u1 = x1 + x2^2\nu2 = x2\n")
    proc = subprocess.run([sys.executable, "-m", "jacinv", "invert", path], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "x1 = u1 - u2^2" in proc.stdout
