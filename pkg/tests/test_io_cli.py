import json
from fractions import Fraction

import pytest
from hypothesis import given

from dpphard import cli, jsonio, verify
from dpphard.config import Guards, check_guard, GuardExceeded
from dpphard.edpp import EdppModel, build_distribution
from dpphard.gadgets import reduce_game
from dpphard.generators import random_regular_game, toy_special_game
from dpphard.linalg import GramMatrix
from dpphard.satgame import validate_e3sat5
from dpphard.solvers import maxdet_exact

from conftest import psd_matrices, vector_sets


@given(psd_matrices())
def test_gram_round_trip(A):
    assert jsonio.gram_from_json(json.loads(jsonio.dumps(jsonio.gram_to_json(A)))) == A


@given(vector_sets())
def test_vectors_round_trip(V):
    assert jsonio.vectors_from_json(json.loads(jsonio.dumps(jsonio.vectors_to_json(V)))) == V


def test_reduced_round_trip():
    G, _ = random_regular_game(2, 2, 2, 3)
    for aug in (False, True):
        R = reduce_game(G, aug)
        back = jsonio.reduced_from_json(json.loads(jsonio.dumps(jsonio.reduced_to_json(R))))
        assert back == R and back.index_of == R.index_of


def test_game_and_result_round_trip():
    G = toy_special_game(1)
    assert jsonio.game_from_json(jsonio.game_to_json(G)) == G
    r = maxdet_exact(GramMatrix(((2, 1), (1, 2))))
    d = jsonio.solve_result_to_json(r)
    assert d["det"] == "3" and jsonio.solve_result_from_json(d) == r


def test_scalars_reject_floats():
    with pytest.raises(TypeError):
        jsonio.scalar_from_json(0.5)
    assert jsonio.scalar_from_json("-3/9") == Fraction(-1, 3)


def test_distribution_json():
    d = jsonio.distribution_to_json(build_distribution(EdppModel(GramMatrix.identity(1), 1)))
    assert d["masses"] == ["1/2", "1/2"] and d["z"] == "2"


def test_guards_from_env():
    g = Guards.from_env({"DPPHARD_GUARD_EDPP_ORDER": "3"})
    assert g.edpp_order == 3 and g.detmax_order == Guards().detmax_order
    with pytest.raises(GuardExceeded):
        check_guard(4, 3, "thing")


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_cli_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen", "random-psd", "--n", "8", "--seed", "1", "--out", str(a)], capsys)[0] == 0
    assert run(["gen", "random-psd", "--n", "8", "--seed", "1", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert jsonio.gram_from_json(jsonio.read_json(a)).n == 8
    manifest = jsonio.read_json(str(a) + ".manifest.json")
    assert manifest["seed"] == 1 and manifest["outputs"] == [str(a)] and "guards" in manifest


def test_cli_e3sat5(tmp_path, capsys):
    out = tmp_path / "f.json"
    assert run(["gen", "e3sat5", "--n", "3", "--seed", "2", "--out", str(out)], capsys)[0] == 0
    assert validate_e3sat5(jsonio.cnf_from_json(jsonio.read_json(out)))[0]


def test_cli_reduce(tmp_path, capsys):
    g, r = tmp_path / "g.json", tmp_path / "r.json"
    run(["gen", "toy-special", "--out", str(g)], capsys)
    code, cap = run(["reduce", str(g), "--out", str(r)], capsys)
    info = json.loads(cap.err)
    assert code == 0 and info["N"] == 30 * 7 and info["K"] == 30 and info["delta"] == 15 and info["special"]


def test_cli_reduce_variants(tmp_path, capsys):
    g, r, ra, rs = (tmp_path / n for n in ("g.json", "r.json", "ra.json", "rs.json"))
    run(["gen", "random-game", "--k", "3", "--delta", "2", "--sigma", "3", "--out", str(g)], capsys)
    run(["reduce", str(g), "--out", str(r)], capsys)
    run(["reduce", str(g), "--augmented", "--out", str(ra)], capsys)
    run(["reduce", str(g), "--scale-sq", "2", "--out", str(rs)], capsys)
    R, RA = jsonio.reduced_from_json(jsonio.read_json(r)), jsonio.reduced_from_json(jsonio.read_json(ra))
    assert RA.augmented and RA.vectors.dim == 6 * 2 ** (RA.m + 1) + RA.N
    assert R.vectors.dim == 6 * 2 ** (R.m + 1)
    assert jsonio.vectors_from_json(jsonio.read_json(rs)).scale_sq == 2 * R.vectors.scale_sq


def test_cli_reduce_rejects_irregular(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"x_count": 1, "y_count": 2, "sigma": 1, "edges": [[0, 0], [0, 1]], "tables": [[0], [0]]}))
    assert run(["reduce", str(g)], capsys)[0] == 2


def write_matrix(tmp_path, rows):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"n": len(rows), "rows": [[str(x) for x in r] for r in rows]}))
    return str(p)


def test_cli_solve(tmp_path, capsys):
    m = write_matrix(tmp_path, [[2, 1], [1, 2]])
    code, cap = run(["solve", m], capsys)
    assert code == 0 and json.loads(cap.out)["det"] == "3"
    code, cap = run(["solve", m, "--mode", "greedy", "--k", "1"], capsys)
    out = json.loads(cap.out)
    assert out["det"] == "2" and out["ratio"] == "1"
    eye = write_matrix(tmp_path, [[1, 0], [0, 1]])
    assert json.loads(run(["solve", eye], capsys)[1].out)["det"] == "1"


def test_cli_solve_guard(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("DPPHARD_GUARD_DETMAX_ORDER", "1")
    assert run(["solve", write_matrix(tmp_path, [[2, 1], [1, 2]])], capsys)[0] == 3


def test_cli_edpp(tmp_path, capsys):
    eye = write_matrix(tmp_path, [[1, 0], [0, 1]])
    code, cap = run(["edpp", eye, "--p", "3", "--mode", "exact"], capsys)
    assert code == 0 and json.loads(cap.out)["z"] == "4"
    m = write_matrix(tmp_path, [[2, 1], [1, 2]])
    cf = json.loads(run(["edpp", m, "--mode", "closed-form"], capsys)[1].out)["z"]
    ex = json.loads(run(["edpp", m, "--mode", "exact"], capsys)[1].out)["z"]
    assert cf == ex == "8"
    ap = json.loads(run(["edpp", m, "--p", "2", "--mode", "approx"], capsys)[1].out)
    lo, hi = map(Fraction, ap["interval"])
    assert lo <= 14 <= hi
    assert run(["edpp", m, "--p", "0"], capsys)[0] == 2
    assert run(["edpp", m, "--p", "2", "--mode", "closed-form"], capsys)[0] == 2
    s1 = run(["edpp", m, "--mode", "sample", "--samples", "20", "--seed", "5"], capsys)[1].out
    s2 = run(["edpp", m, "--mode", "sample", "--samples", "20", "--seed", "5"], capsys)[1].out
    assert s1 == s2


def test_cli_verify(capsys):
    code, cap = run(["verify", "gadgets"], capsys)
    assert code == 0 and json.loads(cap.out)["passed"]
    assert run(["verify", "nonsense"], capsys)[0] == 2


def test_cli_verify_reports_failure(capsys, monkeypatch):
    monkeypatch.setitem(verify.SUITES, "linalg", lambda seed: [("broken", False, "")])
    code, cap = run(["verify", "all"], capsys)
    assert code != 0 and not json.loads(cap.out)["passed"]


def test_cli_gap(tmp_path, capsys):
    eye = write_matrix(tmp_path, [[1, 0], [0, 1]])
    code, cap = run(["gap", eye, "--s", "2", "--c", "3"], capsys)
    assert code == 0 and cap.out.strip().endswith("BELOW_S")
    m = write_matrix(tmp_path, [[2, 1], [1, 2]])
    code, cap = run(["gap", m, "--s", "2", "--c", "3"], capsys)
    assert code == 0 and cap.out.strip().endswith("AT_LEAST_C")
    code, cap = run(["gap", m, "--s", "1", "--c", "4"], capsys)
    assert code == 4 and cap.out.strip().endswith("BETWEEN")
    assert run(["gap", m, "--s", "3", "--c", "2"], capsys)[0] == 2


def test_cli_bad_arguments(capsys):
    assert run(["gen", "nope"], capsys)[0] == 2
    assert run(["solve", "/nonexistent.json"], capsys)[0] == 2
