from __future__ import annotations

import json

import pytest

from scl.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


TRI = {"geometry": "E2", "simplices": [[[0, 0], [2, 0], [0, 1]]]}
SQ = {"geometry": "E2", "simplices": [[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]]}


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_sc_decide_writes_witness(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, io = run(capsys, "sc-decide", "e2", write(tmp_path, "t.json", TRI), write(tmp_path, "s.json", SQ),
                   "--out", str(out))
    assert code == 0 and json.loads(io.out)["result"]["verified"]
    code, io = run(capsys, "verify-witness", str(out))
    assert code == 0 and json.loads(io.out)["result"]["ok"]


def test_sc_decide_certificate_exit_1(tmp_path, capsys):
    small = {"geometry": "E2", "simplices": [[[0, 0], [1, 0], [0, 1]]]}
    code, io = run(capsys, "sc-decide", "e2", write(tmp_path, "a.json", SQ), write(tmp_path, "b.json", small))
    assert code == 1 and json.loads(io.out)["result"]["certificate"]["invariant"] == "area"


def test_kgroups_table(capsys):
    code, io = run(capsys, "kgroups", "E1", "T1", "--desk-dim", "3", "--max-degree", "4")
    rep = json.loads(io.out)
    assert code == 0 and [rep["result"]["degrees"][str(k)]["dim"] for k in range(5)] == [3, 3, 1, 0, 0]
    assert rep["provenance"]["source"]


def test_reports_are_deterministic(tmp_path, capsys):
    a = run(capsys, "compare", "cube", "--seed", "5")[1].out
    b = run(capsys, "compare", "cube", "--seed", "5")[1].out
    assert a == b


@pytest.mark.parametrize("argv", [["frobnicate"], ["kgroups", "E1", "T1", "--desk-dim", "0"],
                                  ["reduced-s1", "-N", "3"]])
def test_input_errors_exit_2(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{oops")
    code, io = run(capsys, "pt-class", str(p))
    assert code == 2 and "malformed JSON" in io.err


def test_threads_env_validated(monkeypatch, capsys):
    monkeypatch.setenv("SCL_THREADS", "zero")
    assert run(capsys, "kgroups", "S0", "O1", "--reduced")[0] == 2
    monkeypatch.setenv("SCL_THREADS", "2")
    assert run(capsys, "kgroups", "S0", "O1", "--reduced")[0] == 0


def test_subdivision_and_pt_verbs(tmp_path, capsys):
    half = {"geometry": "E2", "simplices": [[[0, 0], [1, 0], [0, 1]]]}
    cover = write(tmp_path, "c.json", {"target": SQ, "pieces": [half]})
    code, io = run(capsys, "subdivision-check", cover)
    assert code == 1 and json.loads(io.out)["result"]["uncovered"]
    terms = write(tmp_path, "terms.json", {"terms": [[1, {"geometry": "E2", "simplices": [SQ["simplices"][0]]}],
                                                     [1, {"geometry": "E2", "simplices": [SQ["simplices"][1]]}]]})
    assert run(capsys, "pt-equal", write(tmp_path, "sq.json", SQ), terms)[0] == 0
    assert run(capsys, "pt-equal", write(tmp_path, "sq.json", SQ), write(tmp_path, "t.json", TRI))[0] == 1


def test_complex_and_homology(tmp_path, capsys):
    planes = write(tmp_path, "p.json", {"ambient": 3, "generators": [[[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]],
                                                                      [[1, 0, 0], [0, 0, 1]]]})
    code, io = run(capsys, "complex", "st", planes)
    assert code == 0 and json.loads(io.out)["result"]["verdict"] == "pass"
    circle = write(tmp_path, "c.json", {"simplices": [["a", "b"], ["b", "c"], ["a", "c"]]})
    code, io = run(capsys, "homology", circle, "--format", "table")
    assert code == 0 and "result.homology.1.rank: 1" in io.out


def test_dehn_and_invariants(tmp_path, capsys):
    tet = write(tmp_path, "tet.json", {"edges": [["l", "arccos(1/3)", 6]]})
    rel = write(tmp_path, "rel.json", {"independent": ["arccos(1/3)"]})
    code, io = run(capsys, "dehn", tet, "--relations", rel)
    assert code == 0 and not json.loads(io.out)["result"]["zero"]
    code, io = run(capsys, "invariants", write(tmp_path, "t.json", TRI), "--compare", write(tmp_path, "s.json", SQ))
    assert code == 1 and json.loads(io.out)["result"]["equal"] is False


def test_paper_suite_partial(capsys):
    code, io = run(capsys, "paper-suite", "--only", "9,10", "--format", "table")
    assert code == 0 and io.out.count("[PASS]") == 2
