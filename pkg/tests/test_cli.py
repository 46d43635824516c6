import json

import pytest

from qcanon.cli import main


@pytest.fixture
def a2_file(tmp_path):
    p = tmp_path / "a2.json"
    p.write_text(json.dumps({"vertices": ["1", "2"], "edges": [["1", "2"]]}))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tensor_cb_v1v1(capsys):
    code, out, _ = run(capsys, "tensor-cb", "--type", "A1", "--weights", "1;1")
    assert code == 0
    data = json.loads(out)
    blocks = {tuple(b["block"]): b["matrix"] for b in data["transition"]}
    assert blocks[(1,)] == [["1", "v^-1"], ["0", "1"]]
    assert data["conventions"]["theta_sign"] == -1
    assert "tensor_order" in data["factors"] and "note" in data["factors"]


def test_build_module_from_file(capsys, a2_file):
    code, out, _ = run(capsys, "build-module", "--cartan", a2_file, "--weights", "1,1", "--depth", "3,3")
    assert code == 0
    assert json.loads(out)["module"]["total_dim"] == 8


def test_negative_weight_exit_2(capsys, a2_file):
    code, _, err = run(capsys, "build-module", "--cartan", a2_file, "--weights=-1,0")
    assert code == 2
    assert "coordinate 1" in err


def test_unknown_vertex_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"vertices": ["1"], "edges": [["1", "9"]]}))
    code, _, err = run(capsys, "theta", "--cartan", str(p))
    assert code == 2 and "unknown vertex" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "theta", "--cartan", str(tmp_path / "missing.json"))
    assert code == 2 and "not found" in err


def test_depth_error_exit_4(capsys):
    code, _, err = run(capsys, "build-module", "--type", "Kronecker", "--weights", "1,0")
    assert code == 4 and "depth" in err


def test_csv_only_for_matrices(capsys):
    code, _, _ = run(capsys, "theta", "--type", "A1", "--format", "csv")
    assert code == 2


def test_transition_csv(capsys):
    code, out, _ = run(capsys, "transition", "--type", "A1", "--weights", "1;1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "block,row,col,entry"
    assert "1,0,1,v^-1" in lines


def test_gram_f(capsys):
    code, out, _ = run(capsys, "gram", "--type", "A1", "--depth", "1")
    assert code == 0
    assert json.loads(out)["gram"] == [["(v^2)/(v^2 - 1)"]]


def test_ybe_and_braid(capsys):
    code, out, _ = run(capsys, "ybe", "--type", "A1", "--weights", "1;1;1")
    assert code == 0 and json.loads(out)["passed"] is True
    code, out, _ = run(capsys, "braid")
    assert code == 0 and json.loads(out)["report"]["braid_holds"]


def test_theta_table(capsys):
    code, out, _ = run(capsys, "theta", "--type", "A2", "--max-degree", "2")
    assert code == 0
    assert len(json.loads(out)["components"]) == 1 + 2 + 3


def test_out_file_and_determinism(capsys, tmp_path):
    p1, p2 = tmp_path / "x.json", tmp_path / "y.json"
    assert main(["tensor-cb", "--type", "A2", "--weights", "1,0;0,1", "--out", str(p1)]) == 0
    assert main(["tensor-cb", "--type", "A2", "--weights", "1,0;0,1", "--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_wrong_weight_count(capsys):
    code, _, err = run(capsys, "ybe", "--type", "A1", "--weights", "1;1")
    assert code == 2 and "3 weight" in err
