import json
import subprocess
import sys

import pytest

from multiconc.cli import run

from _graphs import cycle, dumbbell


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return write


def graph_input(files, n=4):
    return files("g.json", {"kind": "graph", "adjacency": cycle(n).tolist()})


def test_spectrum_four_cycle(files, capsys):
    assert run(["spectrum", "--input", graph_input(files)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["eigenvalues"] == pytest.approx([0, 1, 1, 2], abs=1e-12)


def test_spectrum_csv(files, capsys):
    assert run(["spectrum", "--input", graph_input(files), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,eigenvalue" and len(lines) == 5


def test_psi(capsys):
    assert run(["psi", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["psi"] == pytest.approx(1.6094379124341003)
    assert run(["psi", "--", "-1"]) == 1


def test_exit_codes(files, capsys):
    g = graph_input(files, 6)
    bad_sets = files("s.json", [[0], [3]])
    assert run(["bound", "markov", "--input", g, "--sets", bad_sets]) == 2
    assert "NotInDeltaK" in capsys.readouterr().err
    assert run(["bogus"]) == 64
    assert run(["spectrum"]) == 64
    broken = files("bad.json", {"kind": "space", "dist": [[0, 1], [2, 0]], "mu": [0.5, 0.5]})
    assert run(["validate", "--input", broken]) == 1
    assert run(["validate", "--input", files("x.json", {"kind": "nope"})]) == 1


def test_bound_and_certify(files, capsys):
    g = files("g.json", {"kind": "graph", "adjacency": cycle(10).tolist()})
    sets = files("s.json", [[0, 1, 2, 3], [5, 6, 7, 8]])
    assert run(["bound", "markov", "--input", g, "--sets", sets]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["certificate"]["status"] == "pass"
    assert run(["certify", "--input", g, "--sets", sets]) == 0
    db = files("db.json", {"kind": "chain", "p": dumbbell().p.tolist()})
    halves = files("h.json", [[0, 1, 2, 3, 4], [8, 9, 10, 11, 12]])
    assert run(["certify", "--input", db, "--sets", halves]) == 0
    assert run(["certify", "--input", db, "--sets", halves, "--lam", "5"]) == 3


def test_model_and_extend(files, capsys):
    assert run(["model", "sphere", "--n", "2", "--k", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["level"] == 1 and out["multiplicity"] == 3
    g = graph_input(files, 5)
    A = files("a.json", [0])
    vals = files("v.json", {"0": 1.0})
    assert run(["extend", "--input", g, "--set", A, "--values", vals, "--which", "lower"]) == 0
    assert json.loads(capsys.readouterr().out)["values"] == [1, 0, -1, -1, 0]


def test_output_file_is_byte_identical(files, tmp_path):
    g = graph_input(files, 8)
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.json"
        assert run(["search-sets", "--input", g, "--k", "2", "--seed", "3",
                    "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multiconc", "psi", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["psi"] == pytest.approx(0.6931471805599453)
