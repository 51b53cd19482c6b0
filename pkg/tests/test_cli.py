from __future__ import annotations

import io as stdio
import json
import subprocess
import sys

import pytest

from nilproj import catalog, io
from nilproj.cli import main
from nilproj.linalg import Subspace


def run(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = main([str(a) for a in argv], out=out, err=err)
    text = out.getvalue()
    doc = json.loads(text) if text.strip() else None
    return code, doc, err.getvalue()


@pytest.fixture
def heis_files(fixtures_dir):
    return fixtures_dir / "heisenberg.json", fixtures_dir / "heisenberg_h.json"


def test_verify(fixtures_dir):
    code, doc, _ = run("verify", fixtures_dir / "heisenberg.json")
    assert code == 0
    assert doc == {"valid": True, "dim": 3, "nilpotency_class": 2, "center_dim": 1,
                   "derived_dim": 1, "jordan_holder_flag": True}
    code, doc, _ = run("verify", fixtures_dir / "abelian.json")
    assert code == 0 and doc["valid"] and doc["nilpotency_class"] == 1


def test_verify_broken(fixtures_dir):
    code, doc, err = run("verify", fixtures_dir / "broken-jacobi.json")
    assert code == 1
    assert doc["valid"] is False and doc["witness"] == [2, 3, 4]
    assert "Jacobi" in err


def test_bch(heis_files, tmp_path):
    alg, _ = heis_files
    code, doc, _ = run("bch", alg, "0,1,0", "0,0,1")
    assert code == 0 and doc["product"] == ["-1/2", "1", "1"]
    t4 = tmp_path / "t4.json"
    io.dump(io.algebra_to_json(catalog.threadlike(4).algebra), t4)
    code, doc, _ = run("bch", t4, "0,0,0,1", "0,0,1,0")
    assert doc["product"] == ["1/12", "1/2", "1", "1"]
    vec = tmp_path / "x.txt"
    vec.write_text("0,1,0\n")
    code, doc, _ = run("bch", alg, f"@{vec}", "0,0,1")
    assert doc["product"] == ["-1/2", "1", "1"]
    code, doc, _ = run("bch", alg, "0,1,0", "0,0,1", "--float")
    assert doc["product"] == [-0.5, 1.0, 1.0]


def test_jump_examples(tmp_path):
    alg = tmp_path / "a.json"
    io.dump(io.algebra_to_json(catalog.abelian(4)), alg)
    cases = [
        (Subspace.coordinate(4, [2, 4]), [1, 3]),
        (Subspace.span([[1], [2], [3], [0]]), [1, 2, 4]),
        (Subspace.coordinate(4, [1, 2, 4]), [3]),
    ]
    for w, expected in cases:
        path = tmp_path / "w.json"
        io.dump(io.subspace_to_json(w), path)
        code, doc, _ = run("jump", alg, path)
        assert code == 0 and doc["jump"] == expected and doc["dual_characterization_agrees"]


def test_beta_and_factorize(heis_files, tmp_path):
    alg, h = heis_files
    code, doc, _ = run("beta", alg, h)
    assert code == 0 and doc["e"] == [3] and doc["jordan_holder"]
    code, doc, _ = run("factorize", alg, h, "0,1,1")
    assert doc["t"] == ["-1/2", "1", "1"] and doc["product"] == ["0", "1", "1"]
    code, doc, _ = run("beta", alg, h, "--e", "2")
    assert code == 1 and doc["error"] == "NotTransversal"
    # span{X1, X2 + X3} has jump set {2} but is also complementary to RX3
    w = tmp_path / "w.json"
    io.dump(io.subspace_to_json(Subspace([[1, 0], [0, 1], [0, 1]])), w)
    code, doc, _ = run("beta", alg, w, "--e", "3")
    assert code == 1 and doc["error"] == "WrongJumpSet"
    code, doc, _ = run("beta", alg, w, "--e", "3", "--allow-extended")
    assert code == 0 and doc["vectors"][1] == ["0", "1", "1"]


def test_project(heis_files, fixtures_dir, tmp_path):
    alg, h = heis_files
    code, doc, _ = run("project", alg, h, "0,1,1", "--nonlinear")
    assert code == 0 and doc["projection"] == ["0", "0", "1"] and doc["membership"]
    code, doc, _ = run("project", alg, h, "1/2,-3,0")
    assert doc["projection"] == ["0", "0", "0"]
    ab = fixtures_dir / "abelian.json"
    w = tmp_path / "w.json"
    io.dump(io.subspace_to_json(Subspace.span([[1], [1], [1]])), w)
    lin = run("project", ab, w, "1,2,3", "--linear")[1]
    nonlin = run("project", ab, w, "1,2,3", "--nonlinear")[1]
    assert lin["projection"] == nonlin["projection"]


def test_probe(fixtures_dir):
    t4 = fixtures_dir / "threadlike4.json"
    code, doc, _ = run("probe", t4, "--point", "0,0,0,1", "--grid", "0.1:3.0:9")
    assert code == 0 and doc["smooth"] and doc["jump_set"] == [3]
    code, doc, _ = run("probe", t4, "--point", "0,0,0,1", "--grid=-0.5:0.5:9")
    assert code == 1 and doc["error"] == "CellBoundaryCrossed"
    h = fixtures_dir / "heisenberg_h.json"
    code, doc, _ = run("probe", fixtures_dir / "heisenberg.json", "--family", f"@{h}",
                       "--point", "0,1,1", "--grid", "0.1:1:5")
    assert code == 0 and max(doc["max_second_difference"]) == 0.0
    code, doc, _ = run("probe", t4, "--beta", "--grid", "3.24:6.18:9")
    assert code == 0 and doc["smooth"] and doc["jump_set"] == [3]
    code, doc, _ = run("probe", t4, "--grid", "0.1:3.0:9")
    assert code == 2


def test_catalog_round_trip(tmp_path):
    for name, dim in [("abelian", 3), ("heisenberg", None), ("threadlike", 5), ("five_dim", None)]:
        args = ["catalog", name] + (["--dim", dim] if dim else [])
        code, doc, _ = run(*args)
        assert code == 0
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        entry = catalog.get(name, dim)
        m = entry.dim
        sub = tmp_path / "sub.json"
        io.dump(io.subspace_to_json(entry.flag.subspace(m - 1)), sub)
        point = ",".join(str(k) for k in range(1, m + 1))
        assert run("verify", path)[1]["valid"]
        for cmd in (["jump", path, sub], ["beta", path, sub], ["project", path, sub, point],
                    ["factorize", path, sub, point], ["bch", path, point, point]):
            a = run(*cmd)
            mem = tmp_path / "mem.json"
            io.dump(io.algebra_to_json(entry.algebra), mem)
            cmd_mem = [mem if c == path else c for c in cmd]
            assert a == run(*cmd_mem)
            assert a[0] == 0


def test_input_errors(heis_files, tmp_path):
    alg, h = heis_files
    assert run("bch", alg, "1,2", "0,0,1")[0] == 2
    assert run("bch", alg, "0.5,1,0", "0,0,1")[0] == 2
    assert run("bch", tmp_path / "missing.json", "1,2,3", "0,0,1")[0] == 2
    assert run("project", alg, h, "1,2,3", "--tol", "0")[0] == 2
    assert run("catalog", "threadlike", "--dim", "2")[0] == 2
    assert run("probe", alg, "--point", "0,0,1", "--grid", "1:2")[0] == 2
    assert run("nonsense")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[")
    assert run("verify", bad)[0] == 2


def test_non_subalgebra_is_violation(tmp_path):
    alg = tmp_path / "five.json"
    io.dump(io.algebra_to_json(catalog.five_dim_example().algebra), alg)
    w = tmp_path / "w.json"
    io.dump(io.subspace_to_json(Subspace.coordinate(5, [3, 4])), w)
    code, doc, _ = run("project", alg, w, "0,0,0,0,1")
    assert code == 1 and doc["error"] == "NotASubalgebra"


def test_dimension_cap_env(fixtures_dir, monkeypatch):
    monkeypatch.setenv("NILPROJ_MAX_DIM", "2")
    code, doc, _ = run("verify", fixtures_dir / "heisenberg.json")
    assert code == 2 and doc["error"] == "DimensionCapExceeded"


def test_console_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "nilproj.cli", "verify",
                           str(fixtures_dir / "heisenberg.json")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["nilpotency_class"] == 2
