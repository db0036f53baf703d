import json
import subprocess
import sys

import pytest

from index3.cli import main
from index3.constructions import megyesi
from index3.field import make_field
from index3.plane import Collineation, PointSet, apply


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_field(capsys):
    code, js = run_json(capsys, "field", "--q", "8", "--tables")
    assert code == 0
    assert js["modulus"] == [1, 1, 0, 1] and js["primitive"] == 2
    assert js["mul_table"][2][4] == 3 and len(js["add_table"]) == 8
    code, out, _ = run(capsys, "field", "--q", "7")
    assert code == 0 and "primitive element: 3" in out
    assert run(capsys, "field", "--q", "12")[0] == 2


def test_construct_verify_equiv_roundtrip(capsys, tmp_path):
    cases = {
        "megyesi": ["megyesi", "--q", "7", "--d", "3", "--mode", "mult"],
        "cosets": ["megyesi", "--q", "7", "--d", "3", "--mode", "mult", "--g0", "1", "--g1", "3"],
        "triad": ["triad", "--q", "7", "--A", "0,1,5"],
        "triangle": ["triangle", "--q", "7", "--B", "1,2"],
        "ex45": ["example45", "--q", "7", "--t", "2"],
        "vertexless": ["vertexless", "--q", "7"],
    }
    paths = {}
    for name, argv in cases.items():
        path = tmp_path / f"{name}.json"
        code, out, err = run(capsys, "construct", *argv, "--json", str(path))
        assert code == 0 and out == "" and "size" in err
        paths[name] = str(path)
        code, rep = run_json(capsys, "verify", str(path))
        assert code == 0 and rep["is_minimal"] and rep["index"] == 3
    code, js = run_json(capsys, "equiv", paths["megyesi"], paths["cosets"])
    assert code == 0 and js["equivalent"] is True
    code, js = run_json(capsys, "equiv", paths["megyesi"], paths["triad"])
    assert code == 1 and js["equivalent"] is False


def test_verify_projective_triangle_and_directions(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(megyesi(make_field(7), 3, "mult").points.to_json()))
    code, rep = run_json(capsys, "verify", str(path), "--directions")
    assert code == 0 and rep["index"] == 3 and rep["size"] == 12
    assert rep["determined_directions"] == 5
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "index: 3" in out


def test_verify_failure_exit(capsys, tmp_path):
    path = tmp_path / "line.json"
    F = make_field(7)
    path.write_text(json.dumps(PointSet(F, [(0, a, 1) for a in range(7)] + [(0, 1, 0)]).to_json()))
    code, rep = run_json(capsys, "verify", str(path))
    assert code == 1 and rep["is_blocking"] and not rep["is_proper"]


def test_equiv_collineation_image(capsys, tmp_path):
    F = make_field(7)
    S = megyesi(F, 1, "add").points
    c = Collineation(F, ((2, 1, 0), (0, 1, 3), (5, 0, 1)))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(S.to_json()))
    b.write_text(json.dumps(apply(c, S).to_json()))
    code, js = run_json(capsys, "equiv", str(a), str(b))
    assert code == 0 and js["equivalent"] and js["canonical_a"] == js["canonical_b"]
    code, js = run_json(capsys, "equiv", str(a), str(b), "--group", "PGammaL")
    assert code == 0


def test_arrow_commands(capsys, tmp_path):
    code, js = run_json(capsys, "arrow", "search", "--group", "add:7", "--m", "8", "--limit", "2")
    assert code == 0 and js["count"] > 2 and len(js["triples"]) == 2 and js["model"] == "add:7"
    code, js = run_json(capsys, "arrow", "search", "--group", "cyclic:7", "--m", "11")
    assert code == 1 and js["count"] == 0
    code, js = run_json(capsys, "arrow", "szonyi", "--p", "5")
    assert code == 0 and js["m"] == 14 and js["status"] == "ok"
    t = tmp_path / "t.json"
    t.write_text(json.dumps({"group": [7], "A": [0], "B": [0], "C": [1, 2]}))
    code, js = run_json(capsys, "arrow", "check", "--triple", str(t))
    assert code == 1 and js["status"] == "not_maximal"
    assert js["witness"] == {"element": 1, "component": "A"} and js["bounds"] == [7, 10]
    t.write_text(json.dumps({"group": [6], "A": [0, 3], "B": [0, 3], "C": [1, 2, 4, 5]}))
    code, js = run_json(capsys, "arrow", "check", "--triple", str(t))
    assert code == 0 and js["structure"]["status"] == "ok"
    code, out, _ = run(capsys, "arrow", "search", "--group", "cyclic:2,2", "--m", "5")
    assert code == 0 and "(0,0)" in out


def test_construct_from_arrow(capsys, tmp_path):
    t = tmp_path / "t.json"
    t.write_text(json.dumps({"group": [7], "A": [0, 1], "B": [0, 1], "C": [1, 2, 3, 4]}))
    code, js = run_json(capsys, "construct", "from-arrow", "--case", "concurrent", "--triple", str(t))
    assert code == 0 and js["recipe"] == "concurrent_arrow" and len(js["points"]) == 14
    t.write_text(json.dumps({"group": [6], "A": [0, 1], "B": [0, 1], "C": [2, 1, 3]}))
    code, js = run_json(capsys, "construct", "from-arrow", "--case", "triangle", "--triple", str(t))
    assert code == 0 and js["recipe"] == "triangle_arrow" and len(js["points"]) == 14
    code, _, err = run(capsys, "construct", "from-arrow", "--case", "triangle", "--triple", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "triad", "--q", "7", "--A", "0,1,2,3,4,5,6"],
        ["construct", "triangle", "--q", "7", "--B", "0,1"],
        ["construct", "megyesi", "--q", "7", "--d", "4", "--mode", "mult"],
        ["construct", "megyesi", "--q", "7", "--d", "3", "--mode", "mult", "--g0", "1"],
        ["construct", "example45", "--q", "7", "--t", "3"],
        ["construct", "triad", "--q", "7", "--A", "x"],
        ["arrow", "szonyi", "--p", "4"],
        ["arrow", "search", "--group", "cyclic:17", "--m", "20"],
        ["arrow", "search", "--group", "bogus", "--m", "3"],
        ["census", "run", "--q", "5"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("index3: error:")


def test_bad_json_input(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "verify", str(p))[0] == 2
    p.write_text(json.dumps({"field": {"p": 7, "k": 1}, "points": [[0, 0, 0]]}))
    assert run(capsys, "verify", str(p))[0] == 2


def test_no_command_and_unknown_command(capsys):
    assert run(capsys, )[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_census_threads_byte_identical(capsys):
    base = ["census", "run", "--q", "7", "--min", "12", "--max", "13", "--json"]
    code1, out1, _ = run(capsys, *base)
    code2, out2, _ = run(capsys, *base, "--threads", "2")
    assert code1 == code2 == 0 and out1 == out2
    js = json.loads(out1)
    assert js["summary"]["12"] == 1 and js["summary"]["13_redei"] == 1


def test_entry_point_subprocess(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "index3", "construct", "triangle", "--q", "7", "--B", "1,6", "--json"],
        capture_output=True, text=True, check=True,
    )  # fmt: skip
    path = tmp_path / "s.json"
    path.write_text(res.stdout)
    res = subprocess.run([sys.executable, "-m", "index3", "verify", "-", "--json"], input=res.stdout, capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["size"] == 13
