from __future__ import annotations

import io
import json
import random
import subprocess
import sys

import pytest

from matgen import jsonio
from matgen.classify import apply_transform, canonical_m2_triple, random_record
from matgen.cli import run
from matgen.exactfield import GF, QQ
from matgen.linalg import Matrix, Subspace


def call(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cli(capsys, monkeypatch):
    def go(*argv, stdin=None):
        code, out, err = call(capsys, monkeypatch, list(argv), stdin)
        return code, (json.loads(out) if out.strip() else None), err
    return go


def test_canonical_then_checks(cli):
    code, rep, _ = cli("canonical", "--n", "3", "--field", "gf:7")
    assert code == 0 and len(rep["matrices"]) == 5
    text = json.dumps(rep)
    code, chk, _ = cli("irredundant-check", stdin=text)
    assert code == 0 and chk == {"generates": True, "irredundant": True, "size": 5}
    code, gen, _ = cli("gen-check", "--json", json.dumps(rep["matrices"][:-1]))
    assert code == 1 and gen["generates"] is False and gen["dim"] < 9


def test_bare_rows_need_field(cli):
    code, rep, _ = cli("gen-check", "--json", "[[[1,1],[0,0]],[[0,0],[1,1]],[[1,0],[0,0]]]", "--field", "qq")
    assert code == 0 and rep["generates"]
    code, rep, err = cli("gen-check", "--json", "[[[1,1],[0,0]]]")
    assert code == 2 and "--field" in rep["message"]


def test_malformed_json_reports_location(cli):
    code, rep, err = cli("gen-check", stdin='{"matrices": [\n  {"rows": [[1, 2]}\n]}')
    assert code == 2 and rep["error"] == "JsonFormatError"
    assert rep["message"].startswith("<stdin>:2:")
    code, rep, _ = cli("gen-check", "--json", '[{"field": "gf:7", "rows": [[1, 0.5]]}]')
    assert code == 2 and rep["message"].startswith("$[0].rows[0][1]")
    code, rep, _ = cli("gen-check", "--json", '[{"field": "gf:6", "rows": [[1]]}]')
    assert code == 2 and rep["message"].startswith("$[0].field")


def test_usage_errors(cli):
    code, rep, _ = cli("no-such-command")
    assert code == 2
    code, rep, _ = cli("canonical")
    assert code == 2
    code, rep, _ = cli("canonical", "--n", "3", "--jobs", "0")
    assert code == 2
    code, rep, _ = cli("gen-check", "/nonexistent/file.json")
    assert code == 2


def test_extract_and_corner(cli):
    units = [Matrix.unit(QQ, 2, i, j) for i in range(2) for j in range(2)]
    text = json.dumps(jsonio.matrices_json(units))
    code, rep, _ = cli("extract", "--json", text)
    assert code == 0 and rep["size"] <= rep["bound"] == 3
    code, rep, _ = cli("corner-complete", "--p", "1", "--q", "1", "--json", text)
    assert code == 0 and rep["size"] <= rep["bound"] == 2


def test_hat_and_laffey(cli):
    x = Matrix.unit(GF(5), 3, 0, 1) + Matrix.unit(GF(5), 3, 1, 0)
    text = json.dumps([jsonio.matrix_json(x)])
    code, rep, _ = cli("hat", "--blocks", "[[1,2],[1,1]]", "--json", text)
    assert code == 0 and rep["g"] == 3 and rep["hats"][0][0]["rows"] == [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "0"]]
    code, rep, _ = cli("canonical", "--n", "3", "--field", "gf:5")
    code, lf, _ = cli("laffey-check", "--blocks", '{"blocks": [[1,2],[1,1]]}', "--json", json.dumps(rep))
    assert code == 0 and lf["lhs"] is lf["rhs"] is True


def test_cap_environment(cli, monkeypatch):
    f = GF(5)
    # cells e11, e12, 0, e11+e12 give two coordinate matrices
    x = Matrix(f, [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 0, 0]])
    text = json.dumps([jsonio.matrix_json(x)])
    code, rep, _ = cli("hat", "--blocks", "[[2,2]]", "--json", text)
    assert code == 0 and len(rep["hats"][0]) == 2
    monkeypatch.setenv("MATGEN_CAP", "1")
    code, rep, _ = cli("hat", "--blocks", "[[2,2]]", "--json", text)
    assert code == 3 and rep["error"] == "CapExceeded"
    monkeypatch.setenv("MATGEN_CAP", "lots")
    code, rep, _ = cli("hat", "--blocks", "[[2,2]]", "--json", text)
    assert code == 2


def five_json(f):
    fam = [
        Subspace(f, 3, [[1, 0, 0]]),
        Subspace(f, 3, [[0, 1, 0]]),
        Subspace(f, 3, [[1, 1, 1]]),
        Subspace(f, 3, [[1, 0, 0], [0, 0, 1]]),
        Subspace(f, 3, [[0, 1, 0], [0, 0, 1]]),
    ]
    return json.dumps({"subspaces": [jsonio.subspace_json(V) for V in fam]})


def test_independence_commands(cli):
    code, rep, _ = cli("gl-indep", "--json", five_json(GF(7)))
    assert code == 0 and rep["independent"] and len(rep["witness"]) == 5
    assert all(w["invertible"] for w in rep["witness"])
    code, rep, _ = cli("gl-indep", "--json", five_json(GF(2)))
    assert code == 1 and rep["witness"] is None
    code, rep, _ = cli("m-indep", "--json", five_json(GF(2)))
    assert code == 0 and rep["independent"]
    code, rep, _ = cli("pattern", "--json", five_json(GF(7)))
    assert code == 0 and rep["pattern"] == "Pattern1" and set(rep["roles"]) == {"L1", "L2", "L3", "P1", "P2"}
    code, rep, _ = cli("stab-algebra", "--json", five_json(GF(7)))
    assert code == 0 and rep["dim"] == 1
    code, rep, _ = cli("stab-algebra", "--json", "[]", "--n", "2", "--field", "gf:3")
    assert code == 0 and rep["dim"] == 4
    code, rep, _ = cli("stab-algebra", "--json", "[]")
    assert code == 2


def test_classification_pipeline(cli):
    code, sa, _ = cli("s-alpha", "--alpha", "3", "--field", "gf:7")
    assert code == 0 and sa["alpha"] == "3"
    code, c3, _ = cli("classify3", "--json", json.dumps(sa))
    assert code == 0 and set(c3["reachable"]) == {"3", "5"} and c3["field"] == "gf:7"
    code, chk, _ = cli("irredundant-check", "--json", json.dumps({"matrices": c3["matrices"]}))
    assert code == 0
    code, gl, _ = cli("gl-indep", "--field", "gf:7", "--json", json.dumps({"witnesses": c3["witnesses"]}))
    assert code == 0 and gl["independent"]
    code, pt, _ = cli("pattern", "--field", "gf:7", "--json", json.dumps({"witnesses": c3["witnesses"]}))
    assert code == 0
    code, sb, _ = cli("s-alpha", "--alpha", "5", "--field", "gf:7")
    code, eq, _ = cli("equivalent3", "--json", json.dumps({"left": sa, "right": sb}))
    assert code == 0 and eq["equivalent"]
    code, s0, _ = cli("s-alpha", "--alpha", "0", "--field", "gf:7")
    code, eq, _ = cli("equivalent3", "--json", json.dumps({"left": sa, "right": s0}))
    assert code == 1 and not eq["equivalent"]
    code, ac, _ = cli("alpha-class", "--alpha", "3", "--field", "gf:7")
    assert code == 0 and set(ac["verified"]) == {"3", "5"}
    code, ac, _ = cli("alpha-class", "--alpha", "1", "--field", "gf:7")
    assert code == 2 and ac["error"] == "DegenerateAlpha"


def test_classify2(cli):
    code, rep, _ = cli("canonical", "--n", "2", "--field", "gf:7")
    f = GF(7)
    rec = random_record(f, 2, 3, random.Random(1))
    moved = apply_transform(canonical_m2_triple(f), rec)
    code, c2, _ = cli("classify2", "--json", json.dumps(jsonio.matrices_json(moved)))
    assert code == 0 and c2["matrices"] == rep["matrices"]
    assert c2["record"]["order"] == "permute, affine, transpose, conjugate"
    code, _, _ = cli("classify2", "--json", json.dumps({"field": "gf:7", "matrices": rep["matrices"][:2]}))
    assert code == 2


def test_redundant_input_is_a_usage_error(cli):
    text = json.dumps({"field": "gf:2", "matrices": [{"rows": [[0, 0, 1], [1, 0, 1], [0, 1, 0]]}] * 5})
    code, rep, _ = cli("classify3", "--json", text)
    assert code == 2 and rep["error"] == "NotIrredundant"


def test_centralizer_and_dims(cli):
    code, sa, _ = cli("s-alpha", "--alpha", "2", "--field", "gf:7")
    code, rep, _ = cli("centralizer", "--json", json.dumps(sa))
    assert code == 0 and rep["dim"] == 1
    code, rep, _ = cli("dims", "--case", "2x3")
    assert code == 0 and rep["dim_I"] == 9
    code, rep, _ = cli("dims", "--case", "3x5", "--alpha", "3")
    assert code == 0 and rep["dim_I"] == 19 and rep["dim_Z"] == 37 and rep["centralizer_dim"] == 1
    code, rep, _ = cli("azumaya-check", "--d", "7", "--n", "3", "--r", "5")
    assert code == 0 and rep["guaranteed"] and rep["threshold"] == 8 and "guaranteed" in rep["message"]
    code, rep, _ = cli("azumaya-check", "--d", "8", "--n", "3", "--r", "5")
    assert code == 1 and not rep["guaranteed"]
    code, rep, _ = cli("azumaya-check", "--d", "8", "--n", "4", "--r", "5")
    assert code == 2


def test_verify_suites(cli):
    code, rep, _ = cli("verify", "--suite", "pgl2", "--q", "3", "--no-timing")
    assert code == 0 and rep["ok"] and rep["independence_number"] == 3 and "elapsed" not in rep
    code, rep, _ = cli("verify", "--suite", "dims")
    assert code == 0 and rep["counts"]["violations"] == 0
    code, rep, _ = cli("verify", "--suite", "four-lines", "--q", "7")
    assert code == 2 and rep["error"] == "UnsupportedField"
    code, rep, _ = cli("verify", "--suite", "all", "--q", "3")
    assert code == 2


def test_no_timing_output_is_byte_identical(capsys, monkeypatch):
    outs = []
    for _ in range(2):
        assert run(["verify", "--suite", "laffey-random", "--trials", "20", "--seed", "4", "--no-timing"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and '"elapsed"' not in outs[0]


def test_output_file(cli, tmp_path):
    out = tmp_path / "r.json"
    code, rep, _ = cli("canonical", "--n", "2", "-o", str(out))
    assert code == 0 and rep is None
    doc = json.loads(out.read_text())
    assert doc["n"] == 2 and doc["field"] == "qq"


def test_input_files(cli, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    code, _, _ = cli("s-alpha", "--alpha", "3", "--field", "gf:7", "-o", str(a))
    code, _, _ = cli("s-alpha", "--alpha", "5", "--field", "gf:7", "-o", str(b))
    code, rep, _ = cli("equivalent3", str(a), str(b))
    assert code == 0 and rep["equivalent"]


def test_console_script_pipe():
    first = subprocess.run(
        [sys.executable, "-m", "matgen", "canonical", "--n", "4", "--field", "gf:3"],
        capture_output=True, text=True, check=True,
    )
    second = subprocess.run(
        [sys.executable, "-m", "matgen", "irredundant-check"],
        input=first.stdout, capture_output=True, text=True,
    )
    assert second.returncode == 0
    assert json.loads(second.stdout)["irredundant"] is True


# JSON encoding


def test_json_roundtrips():
    f = GF(2, 2)
    m = Matrix(f, [[[0, 1], 1], [0, [1, 1]]])
    assert jsonio.matrix_from_json(jsonio.matrix_json(m)) == m
    V = Subspace(f, 3, [[1, [0, 1], 0]])
    assert jsonio.subspace_from_json(jsonio.subspace_json(V)) == V
    Z = Subspace.zero(f, 3)
    assert jsonio.subspace_from_json(jsonio.subspace_json(Z)) == Z
    assert jsonio.scalar_from_json(QQ, "-3/4", "$") == QQ.parse("-3/4")


@pytest.mark.parametrize(
    "doc,where",
    [
        ({"field": "qq", "rows": [[True]]}, "$.rows[0][0]"),
        ({"field": "qq", "rows": [[1, 2], [3]]}, "$.rows"),
        ({"field": 7, "rows": [[1]]}, "$.field"),
        ({"field": "qq"}, "$"),
        ([[1]], "$"),
    ],
)
def test_json_errors(doc, where):
    with pytest.raises(jsonio.JsonFormatError) as ei:
        jsonio.matrix_from_json(doc)
    assert ei.value.where == where


def test_json_ambient_mismatch():
    doc = {"field": "gf:3", "subspaces": [{"basis": [[1, 0]]}, {"basis": [[1, 0, 0]]}]}
    with pytest.raises(jsonio.JsonFormatError):
        jsonio.subspaces_from_json(doc)
    with pytest.raises(jsonio.JsonFormatError):
        jsonio.matrices_from_json({"matrices": [{"field": "gf:3", "rows": [[1]]}, {"field": "gf:5", "rows": [[1]]}]})
