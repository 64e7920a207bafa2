import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from linepin.cli import (EXIT_INPUT, EXIT_OK, EXIT_PRECONDITION, InputError, dump_document,
                         load_document, rat_from_json, rat_to_json, read_off, run)
from linepin.generators import gen_ortho8
from linepin.linespace import make_constraint


def call(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, io.StringIO(stdin), out, err)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), err.getvalue()


def pipe(first, second):
    code, doc, _ = call(first)
    assert code == EXIT_OK
    return call(second, json.dumps(doc))


def test_check_six_k1():
    code, doc, _ = pipe(["generate", "six_k1"], ["check"])
    assert code == EXIT_OK
    assert doc["verdict"] == "pinned" and doc["dimE"] == 1
    assert doc["case"] == "negative_side"      # see the decisions ledger


def test_check_quadric_prints_the_witness():
    code, doc, _ = pipe(["generate", "quadric_4block"], ["check"])
    assert code == EXIT_OK
    assert doc["verdict"] == "not_pinned"
    assert doc["certificate"] == {"kind": "direct", "u": ["1/8", "0", "1/8", "1/8"]}


def test_minimize_ortho8_keeps_all():
    code, doc, _ = pipe(["generate", "ortho8"], ["minimize"])
    assert code == EXIT_OK and doc["indices"] == list(range(8))


def test_classify_and_orthogonalize():
    code, doc, _ = pipe(["generate", "char_ortho", "2b"], ["classify"])
    assert code == EXIT_OK and doc["label"] == "(2b)" and doc["blocks"] == ["3cross", "3cross"]
    code, doc, _ = pipe(["generate", "tangent_4pinning"], ["classify"])
    assert doc["four_pinning"] is True and doc["label"] is None
    code, doc, _ = pipe(["generate", "tangent_4pinning"], ["orthogonalize"])
    assert doc["constraints"][0] == {"lam": "0", "dir": ["-1", "0", "0"]}


def test_polytope_commands():
    code, doc, _ = pipe(["generate", "infinite", "3"], ["check"])
    assert code == EXIT_OK and doc["verdict"] == "pinned"
    code, doc, _ = pipe(["generate", "infinite", "3"], ["reduce-polytopes"])
    assert doc["members"] == list(range(9))
    assert [e["tangency"] for e in doc["report"]][6:] == ["coplanar_facet"] * 3


def test_oracle_command_is_deterministic():
    _, gen, _ = call(["generate", "quadric_4block"])
    text = json.dumps(gen)
    first = call(["oracle", "--seed", "5", "--random", "400"], text)
    second = call(["oracle", "--seed", "5", "--random", "400"], text)
    assert first == second and first[1]["refuted"] is True


def test_reduction_commands():
    pts = {"points": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"], ["1", "1"]]}
    code, doc, _ = call(["steinitz"], json.dumps(pts))
    assert code == EXIT_OK and len(doc["indices"]) <= 4
    hs = {"halfspaces": [["1", "0", "0"], ["-1", "0", "0"], ["0", "1", "0"], ["0", "-1", "0"]]}
    code, doc, _ = call(["helly-flat"], json.dumps(hs))
    assert code == EXIT_OK and len(doc["indices"]) == 4
    pc = {"halfspaces": [["1", "0", "-1"], ["-1", "0", "-1"], ["0", "1", "-1"], ["0", "-1", "-1"]]}
    code, doc, _ = call(["positive-cone"], json.dumps(pc))
    assert code == EXIT_OK and len(doc["indices"]) <= 4


def test_exit_codes():
    assert call(["check"], "{not json")[0] == EXIT_INPUT
    code, _, err = call(["check"], '{"constraints":[{"lam":0.5,"dir":["1","0","0"]}]}')
    assert code == EXIT_INPUT and "constraints[0].lam" in err
    assert call(["check"], '{"constraints":[{"lam":"0","dir":["0","0","1"]}]}')[0] == EXIT_INPUT
    assert call(["check"], '{"schema":"other/9","constraints":[]}')[0] == EXIT_INPUT
    assert call(["generate", "nothing"])[0] == EXIT_INPUT
    assert call(["frobnicate"])[0] == EXIT_INPUT
    assert call(["check", "--seed", "-1"], "{}")[0] == EXIT_INPUT
    code, _, err = call(["minimize"], '{"constraints":[{"lam":"1","dir":["1","0","0"]}]}')
    assert code == EXIT_PRECONDITION and "NotAPinning" in err
    assert call(["steinitz"], '{"points":[["1","0"],["0","1"]]}')[0] == EXIT_PRECONDITION


def test_rationals():
    assert rat_to_json(Fraction(-3, 6)) == "-1/2" and rat_to_json(4) == "4"
    assert rat_from_json("2/4", "x") == Fraction(1, 2) and rat_from_json(7, "x") == 7
    assert rat_from_json("0.125", "x") == Fraction(1, 8)
    for bad in (0.5, True, "1/0", "abc", None):
        with pytest.raises(InputError):
            rat_from_json(bad, "x")


def test_round_trip_is_identity_on_canonical_documents():
    doc = {"schema": "linepin/1", "constraints": list(gen_ortho8().constraints),
           "points": [(Fraction(1, 3), Fraction(-2))], "hints": [(0, 1, Fraction(1, 2), 0)]}
    text = dump_document(doc)
    again = load_document(text)
    assert dump_document(again) == text
    assert again["constraints"] == list(gen_ortho8().constraints)


def test_off_import_is_exact(tmp_path):
    off = tmp_path / "tetra.off"
    off.write_text("OFF\n# tetrahedron\n4 4 0\n0 -1 1\n0 1 1\n1 0 0\n1 0 2.0\n3 0 1 2\n")
    poly = read_off(off.read_text())
    assert (1, 0, 2) in poly.vertices
    code, doc, _ = call(["reduce-polytopes", "--off", str(off)])
    assert code == EXIT_OK and doc["report"][0]["constraints"] == [{"lam": "1", "dir": ["0", "-1", "0"]}]
    assert read_off("OFF\n1 0 0\n0.1 0 0\n").vertices == ((Fraction(1, 10), 0, 0),)
    with pytest.raises(InputError):
        read_off("OFF\n2 0 0\n1 2 3\n")


def test_plot_data():
    _, gen, _ = call(["generate", "quadric_4block"])
    code, doc, _ = call(["check", "--emit-plot-data"], json.dumps(gen))
    kinds = [s["kind"] for s in doc["plot"]["segments"]]
    assert kinds[0] == "reference" and kinds.count("constraint") == 4 and kinds[-1] == "witness"


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "linepin", "generate", "six_k2"],
                          capture_output=True, text=True, check=True)
    doc = json.loads(proc.stdout)
    assert doc["schema"] == "linepin/1" and len(doc["constraints"]) == 6
    proc2 = subprocess.run([sys.executable, "-m", "linepin", "check"], input=proc.stdout,
                           capture_output=True, text=True)
    assert proc2.returncode == 0 and json.loads(proc2.stdout)["dimE"] == 2
