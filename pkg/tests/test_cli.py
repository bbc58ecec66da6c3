import json

import numpy as np
import pytest

from sepcone.cli import RunConfig, build_parser, dumps, main, parse_matrix, run


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def _matrix(M):
    M = np.asarray(M, dtype=float)
    return {"rows": M.shape[0], "cols": M.shape[1], "data": M.ravel().tolist()}


def test_bound_table(capsys):
    assert main(["bound-table", "--k-max", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "k,rho_k,rho_k_squared,gurvits_3q_ref"
    assert lines[1].startswith("1,1,1,")
    assert lines[2].startswith("2,1,1,")
    assert lines[3].startswith("3,0.894427190999916,0.8,0.852802865422442")


def test_check_map_identity(tmp_path, capsys):
    path = _write(tmp_path, "I.json", _matrix(np.eye(4)))
    assert main(["check-map", "--matrix", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "Positive"
    assert out["lambda"] == pytest.approx(1.0)


def test_check_map_negative(tmp_path, capsys):
    path = _write(tmp_path, "M.json", _matrix(np.diag([1.0, 1.2, 1.0, 1.0])))
    assert main(["check-map", "--matrix", path]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "NotPositive"
    y = np.array(out["image"])
    assert y[0] < np.linalg.norm(y[1:])


def test_radius_matrix_ball(capsys):
    assert main(["radius", "--matrix-ball", "--m", "2", "--n", "2", "--r1", "1", "--r2", "1"]) == 0
    assert capsys.readouterr().out == "rho\n1\n"


def test_radius_ball_ball_and_ellipsoids(tmp_path, capsys):
    assert main(["radius", "--ball-ball", "--rho1", "0.7071067811865476", "--rho2", "0.7071067811865476",
                 "--m", "3", "--n", "3"]) == 0
    assert float(capsys.readouterr().out.split()[1]) == pytest.approx(0.5)
    p1 = _write(tmp_path, "p1.json", {"d": 3, "P": [2, 0, 0, 1]})
    p2 = _write(tmp_path, "p2.json", {"d": 3, "P": [3, 0, 0, 1]})
    assert main(["radius", "--ellipsoids", p1, p2, "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["f_max"] == pytest.approx(11.0) and out["branch"] == "Rank1"


def test_classify(tmp_path, capsys):
    path = _write(tmp_path, "I2.json", _matrix(np.eye(2)))
    assert main(["classify", "--matrix", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["tag"] == "NotExtreme"
    assert np.allclose(out["evidence"]["split"][0], [[1, 1], [1, 1]])


def test_faces_modes(tmp_path, capsys):
    assert main(["faces", "--mode", "type1", "--m", "3", "--n", "4", "--count", "3"]) == 0
    items = json.loads(capsys.readouterr().out)
    assert len(items) == 3 and all(abs(it["pairing"]) < 1e-12 for it in items)
    assert main(["faces", "--mode", "type2", "--m", "3", "--n", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(g["type2_member"] for g in out["generators"])
    path = _write(tmp_path, "I3.json", _matrix(np.eye(3)))
    assert main(["faces", "--mode", "type2", "--matrix", path]) == 0
    assert json.loads(capsys.readouterr().out) == {"type2_member": False}
    assert main(["faces", "--mode", "intersect", "--m", "3", "--n", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["pairing_a"]) < 1e-12 and abs(out["pairing_b"]) < 1e-12


def test_decompose_and_witness(tmp_path, capsys):
    E = np.zeros((3, 3))
    E[0, 0] = 1.0
    path = _write(tmp_path, "E.json", _matrix(E))
    assert main(["decompose", "--matrix", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["success"]
    recon = np.einsum("k,ki,kj->ij", out["weights"], out["ys"], out["xs"])
    assert np.allclose(recon, E, atol=1e-7)
    M1 = np.zeros((3, 3))
    M1[:2, :2] = [[1, -1], [-1, 1]]
    B = _write(tmp_path, "B.json", _matrix(np.outer([1, 1, 0], [1, 1, 0]) - 0.1 * M1 + np.diag([0, 0, 1e-3])))
    Mp = _write(tmp_path, "M.json", _matrix(M1))
    code = main(["witness", "--element", B, "--map", Mp])
    out = json.loads(capsys.readouterr().out)
    assert code == 1 and out["verdict"] == "CertifiedNonSeparable"


def test_search_fmax_trace(tmp_path, capsys):
    p = _write(tmp_path, "p.json", {"d": 3, "P": [1, 0, 0, 1]})
    assert main(["search-fmax", "--p1", p, "--p2", p, "--budget", "20"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "count,source,value,best"
    assert lines[1].startswith("1,rank1_optimizer,3,3")


def test_qubit_ball(capsys):
    assert main(["qubit-ball", "--k", "2", "--epsilon", "0.1", "--samples", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "index,distance,residual,success"
    assert lines[1].startswith("0,0,0,true")


def test_qubit_ball_out_of_range(capsys):
    assert main(["qubit-ball", "--k", "5", "--epsilon", "0.1"]) == 2
    assert "k in" in capsys.readouterr().err


def test_malformed_json_reports_position(tmp_path, capsys):
    path = _write(tmp_path, "bad.json", '{"rows": 2, "cols": 2,\n "data": [1, 2, 3')
    assert main(["check-map", "--matrix", path]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "column" in err


@pytest.mark.parametrize("obj, fragment", [
    ({"rows": 2, "cols": 2, "data": [1, 2, 3]}, "expected rows*cols"),
    ({"rows": 2, "cols": 2, "data": [1, "x", 3, 4]}, "data[1]"),
    ({"rows": 2, "data": []}, "keys rows, cols, data"),
])
def test_bad_matrix_objects(tmp_path, capsys, obj, fragment):
    path = _write(tmp_path, "m.json", obj)
    assert main(["check-map", "--matrix", path]) == 2
    assert fragment in capsys.readouterr().err


def test_dimension_mismatch_is_input_error(tmp_path, capsys):
    B = _write(tmp_path, "B.json", _matrix(np.eye(3)))
    M = _write(tmp_path, "M.json", _matrix(np.eye(4)))
    assert main(["witness", "--element", B, "--map", M]) == 2
    p = _write(tmp_path, "p.json", {"d": 4, "P": [1, 0, 0, 0, 1, 0, 0, 0, 1]})
    assert main(["decompose", "--matrix", B, "--k1", p]) == 2
    assert main(["check-map", "--matrix", str(tmp_path / "missing.json")]) == 2


def test_missing_radius_parameters(capsys):
    assert main(["radius", "--matrix-ball", "--m", "2"]) == 2


def test_same_config_same_output(tmp_path):
    ns = build_parser().parse_args(["faces", "--mode", "type1", "--m", "4", "--n", "3", "--seed", "7"])
    cfg = RunConfig.from_namespace(ns)
    assert run(cfg).text == run(RunConfig.from_namespace(ns)).text
    out = tmp_path / "o.json"
    main(["faces", "--mode", "type1", "--m", "4", "--n", "3", "--seed", "7", "--output", str(out)])
    assert out.read_text() == run(cfg).text


def test_qubit_ball_output_independent_of_threads(monkeypatch, capsys):
    args = ["qubit-ball", "--k", "2", "--epsilon", "0.2", "--samples", "3", "--seed", "1"]
    monkeypatch.setenv("SEPCONE_THREADS", "1")
    main(args)
    one = capsys.readouterr().out
    monkeypatch.setenv("SEPCONE_THREADS", "4")
    main(args)
    assert capsys.readouterr().out == one


def test_json_floats_have_17_digits():
    assert dumps({"x": 0.1}) == '{"x": 0.10000000000000001}\n'
    assert json.loads(dumps({"x": 1 / 3}))["x"] == 1 / 3


def test_every_subcommand_help_names_a_formula(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    for name, sp in sub.choices.items():
        text = sp.format_help()
        assert any(tok in text for tok in ("=", "<=", "^")), name


def test_parse_matrix_shape():
    assert parse_matrix({"rows": 2, "cols": 3, "data": list(range(6))}).shape == (2, 3)
