import json
import subprocess
import sys

import pytest

from milnor import PolyMatrix, det, parse_poly
from milnor.cli import run

WORKED = "[[1, x^-1*y^-1],[0,1]]"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factor_worked_example(capsys):
    code, out, _ = call(capsys, "factor", "--field", "rational", WORKED, "--output", "json")
    assert code == 0
    doc = json.loads(out)
    checks = {c["name"]: c["passed"] for c in doc["verification"]["checks"]}
    assert checks["product"] and doc["verification"]["ok"]


def test_global_flags_before_command(capsys):
    code, out, _ = call(capsys, "--output", "json", "factor", WORKED)
    assert code == 0 and json.loads(out)["kind"] == "factor"


def test_decompose_witness(capsys):
    code, out, _ = call(capsys, "decompose", "x^-1*y^-1", "--output", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["outputs"]["verdict"] == "not in R_x + R_y"
    assert doc["outputs"]["obstruction"] == "x^-1*y^-1"


def test_verify_tampered(capsys, tmp_path):
    code, out, _ = call(capsys, "factor", WORKED, "--output", "json")
    good = tmp_path / "good.json"
    good.write_text(out)
    doc = json.loads(out)
    doc["outputs"]["det_a"] = "x"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = call(capsys, "verify", str(good))
    assert code == 0
    code, out, _ = call(capsys, "verify", str(bad))
    assert code == 1 and "det_a" in out


def test_verify_jobs_independent(capsys, tmp_path):
    paths = []
    for seed in range(4):
        code, text, _ = call(capsys, "gen", "sl", "-n", "2", "--seed", str(seed))
        code, out, _ = call(capsys, "factor", text.strip(), "--output", "json")
        p = tmp_path / f"c{seed}.json"
        p.write_text(out)
        paths.append(str(p))
    c1, o1, _ = call(capsys, "verify", *paths, "--output", "json")
    c2, o2, _ = call(capsys, "verify", *paths, "--jobs", "2", "--output", "json")
    assert c1 == c2 == 0 and json.loads(o1) == json.loads(o2)


def test_input_errors(capsys):
    code, _, err = call(capsys, "factor", "[[1, x +],[0,1]]")
    assert code == 2 and "line 1" in err and "column" in err
    code, _, err = call(capsys, "factor", "[[x, 0],[0, 1 + x]]")
    assert code == 2 and "NOT_GL" in err
    code, _, _ = call(capsys, "verify", "/nonexistent/cert.json")
    assert code == 2
    code, _, _ = call(capsys, "--field", "fp:91", "det", "[[1]]")
    assert code == 2
    code, _, _ = call(capsys, "nosuchcommand")
    assert code == 2


def test_det_cross_check(capsys):
    code, out, _ = call(capsys, "det", "[[x, y],[1, x^-1]]")
    assert code == 0 and parse_poly(out.strip()) == parse_poly("1 - y")


def test_smith(capsys):
    code, out, _ = call(capsys, "smith", "[[2, 4],[3, 5]]", "--output", "json")
    assert code == 0 and json.loads(out)["verification"]["ok"]
    code, out, _ = call(capsys, "smith", "[[y, y^2],[1, y + 1]]", "--domain", "ky")
    assert code == 0


def test_extract_and_double_and_glue(capsys):
    assert call(capsys, "extract", "[[x*y, 1],[0, x*y]]")[0] == 0
    assert call(capsys, "extract", "[[x*y, 1],[0, x*y]]", "--variable", "y")[0] == 0
    assert call(capsys, "double", "[[x^-1*y^-1]]")[0] == 0
    assert call(capsys, "glue", WORKED)[0] == 0


def test_check_square(capsys):
    code, out, _ = call(capsys, "check-square", "cartesian", "1 + x*y", "1 + x*y")
    assert code == 0
    code, out, _ = call(capsys, "check-square", "cartesian", "0", "0")
    assert code == 0
    code, out, _ = call(capsys, "check-square", "truncation", "1", "y^-1", "--output", "json")
    assert code == 0 and "y^-1" in out
    code, out, _ = call(capsys, "check-square", "iso", WORKED, "[[1,0],[0,1]]")
    assert code == 0


def test_gen_deterministic(capsys):
    a = call(capsys, "gen", "sl", "-n", "3", "--complexity", "8", "--seed", "5")[1]
    b = call(capsys, "gen", "sl", "-n", "3", "--complexity", "8", "--seed", "5")[1]
    assert a == b


def test_gen_identity(capsys):
    out = call(capsys, "gen", "sl", "-n", "3", "--complexity", "0")[1]
    assert PolyMatrix.parse(out) == PolyMatrix.identity(3)


@pytest.mark.parametrize("seed", range(5))
def test_gen_sl_det_one(capsys, seed):
    out = call(capsys, "gen", "sl", "-n", "3", "--complexity", "8", "--seed", str(seed))[1]
    assert det(PolyMatrix.parse(out)) == 1


def test_gen_kinds(capsys):
    for kind in ("gl", "smith", "base"):
        assert call(capsys, "gen", kind, "-n", "2")[0] == 0
    code, out, _ = call(capsys, "gen", "smith", "-n", "2", "--domain", "ky")
    assert code == 0
    assert call(capsys, "gen", "sl", "-n", "0")[0] == 2


def test_field_env(capsys, monkeypatch):
    monkeypatch.setenv("MILNOR_FIELD", "fp:7")
    code, out, _ = call(capsys, "det", "[[3, 0],[0, 5]]")
    assert code == 0 and out.strip() == "1"


def test_pipe_gen_factor_verify(tmp_path):
    exe = [sys.executable, "-m", "milnor"]
    gen = subprocess.run(exe + ["gen", "sl", "-n", "3", "--seed", "2"], capture_output=True, text=True, check=True)
    fac = subprocess.run(exe + ["factor", "-", "--output", "json"], input=gen.stdout, capture_output=True, text=True)
    assert fac.returncode == 0
    ver = subprocess.run(exe + ["verify", "-"], input=fac.stdout, capture_output=True, text=True)
    assert ver.returncode == 0


def test_matrix_from_file(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text(WORKED)
    assert call(capsys, "factor", f"@{p}")[0] == 0


def test_emit_on_fail_flag_parses(capsys):
    assert call(capsys, "--emit-on-fail", "factor", WORKED)[0] == 0
