import io
import json
import subprocess
import sys

import numpy as np
import pytest

from schurlayers import MatrixConj, SchurCoefficients, layout
from schurlayers.cli import main, run


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


@pytest.mark.parametrize("argv,expected", [
    (["count", "--kind", "ign", "--n", "4"], {"dim": 15}),
    (["count", "--kind", "ign", "--n", "2"], {"dim": 8}),
    (["count", "--kind", "deepsets", "--n", "5"], {"dim": 2}),
    (["count", "--kind", "dws", "--dims", "2,3,4,2", "--oracle"],
     {"closed_form": 114, "oracle": 114, "match": True}),
    (["count", "--kind", "ign", "--n", "3", "--oracle"], {"closed_form": 14, "oracle": 14, "match": True}),
])
def test_count_examples(argv, expected):
    result = run(argv)
    assert result.status == "ok" and result.exit_code == 0
    assert result.payload == expected


def test_count_wreath():
    result = run(["count", "--kind", "wreath", "--n", "3", "--k", "4", "--outer", "[[1,2,3,0]]", "--oracle"])
    assert result.payload["h"] == 4 and result.payload["oracle"] == 5 and result.payload["match"]
    result = run(["count", "--kind", "wreath", "--dims", "2,2,2", "--k", "2"])
    assert result.payload["nonsiamese"] == 49


def test_count_dws_verbose():
    result = run(["count", "--kind", "dws", "--dims", "3,4,4,4,3", "--verbose"])
    assert result.payload["dim"] == 257
    assert result.payload["multiplicities"]["beta"] == [5, 3, 5]


def test_decompose_graph(tmp_path):
    path = _write(tmp_path, "A.json", np.ones((4, 4)).tolist())
    result = run(["decompose", "--kind", "graph", "--n", "4", "--in", path])
    assert result.status == "ok"
    assert np.allclose(result.payload["components"]["v0"], np.eye(4))
    assert max(result.payload["residuals"].values()) <= 1e-10


def test_decompose_vector_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("[1, 2, 3]"))
    result = run(["decompose", "--kind", "vector"])
    assert result.payload["components"]["mean_part"] == [2, 2, 2]


def test_decompose_dws(tmp_path, rng):
    path = _write(tmp_path, "v.json", rng.standard_normal(35).tolist())
    result = run(["decompose", "--kind", "dws", "--dims", "2,3,4,2", "--in", path])
    assert result.status == "ok"
    assert result.payload["residuals"]["reconstruction"] <= 1e-10
    assert any(c["where"] == "W2:matrix" for c in result.payload["components"])


def test_basis_dim(tmp_path):
    spec = _write(tmp_path, "spec.json", {"kind": "MatrixConj", "n": 4})
    out = tmp_path / "basis.json"
    result = run(["basis-dim", "--spec", spec, "--emit-basis", str(out)])
    assert result.payload == {"dim": 15}
    assert len(json.loads(out.read_text())["basis"]) == 15
    triv = _write(tmp_path, "triv.json", {"kind": "Trivial", "dim": 1})
    ws = _write(tmp_path, "ws.json", {"kind": "WeightSpace", "dims": [2, 3, 4, 2]})
    assert run(["basis-dim", "--spec", ws, "--spec-out", triv]).payload == {"dim": 9}


def test_verify(tmp_path, rng):
    spec = _write(tmp_path, "spec.json", {"kind": "MatrixConj", "n": 4})
    coeffs = SchurCoefficients.random(layout(MatrixConj(4)), rng)
    layer = _write(tmp_path, "layer.json", {"coefficients": coeffs.to_json()})
    result = run(["verify", "--spec", spec, "--layer", layer, "--trials", "50", "--seed", "3"])
    assert result.status == "ok" and result.payload["pass"] and result.payload["seed"] == 3

    broken = np.eye(16)
    broken[0, 1] = 1.0
    layer = _write(tmp_path, "broken.json", {"matrix": broken.tolist()})
    result = run(["verify", "--spec", spec, "--layer", layer])
    assert result.status == "fail" and result.exit_code == 1 and not result.payload["pass"]
    assert run(["verify", "--spec", spec, "--layer", layer]).payload == result.payload


def test_verify_wreath(tmp_path):
    spec = _write(tmp_path, "spec.json", {"kind": "WreathTuple", "base": {"kind": "VectorPerm", "n": 3}, "k": 2})
    layer = _write(tmp_path, "layer.json", {"a": [[0.5]], "siamese": []})
    assert run(["verify", "--spec", spec, "--layer", layer]).status == "ok"


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["count", "--kind", "ign"],
    ["count", "--kind", "dws", "--dims", "2,x"],
    ["count", "--kind", "ign", "--n", "1"],
    ["basis-dim", "--spec", "/nonexistent.json"],
])
def test_usage_errors(argv):
    result = run(argv)
    assert result.status == "fail" and result.exit_code == 2 and result.diagnostics


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = run(["basis-dim", "--spec", str(bad)])
    assert result.exit_code == 2 and "malformed JSON" in result.diagnostics[0]


def test_dimension_error(tmp_path):
    path = _write(tmp_path, "A.json", [[1, 2, 3], [4, 5, 6]])
    assert run(["decompose", "--kind", "graph", "--in", path]).exit_code == 2


def test_main_prints_json(capsys):
    assert main(["count", "--kind", "ign", "--n", "4"]) == 0
    assert json.loads(capsys.readouterr().out) == {"dim": 15}


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "schurlayers.cli", "count", "--kind", "ign", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"dim": 14}
