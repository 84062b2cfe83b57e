import json
import subprocess
import sys

import pytest

from creature_lab.cli import canonical, main, run_pipeline, Workspace


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.fixture
def ws(tmp_path, monkeypatch):
    monkeypatch.setenv("CREATURE_LAB_WORKSPACE", str(tmp_path / "ws"))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_gen_deterministic_and_valid(ws, capsys):
    for name in ("a.json", "b.json"):
        rc, _, _ = run(["gen", "--creatures", "4", "--depth", "1", "--arity", "4", "--gap", "10",
                        "--seed", "3", "--out", name], capsys)
        assert rc == 0
    assert (ws / "a.json").read_bytes() == (ws / "b.json").read_bytes()
    rc, out, _ = run(["validate", "--in", "a.json"], capsys)
    assert rc == 0 and out.strip() == "ok"


def test_gen_rejects_low_arity(ws, capsys):
    rc, _, err = run(["gen", "--arity", "3"], capsys)
    assert rc != 0 and "floor" in err


def test_canonical_roundtrip(ws, capsys):
    run(["gen", "--creatures", "3", "--depth", "2", "--arity", "4,6", "--gap", "5", "--out", "z.json"], capsys)
    text = (ws / "z.json").read_text()
    assert canonical(json.loads(text)) == text


def test_z1_commands(ws, capsys):
    run(["gen", "--creatures", "2", "--depth", "1", "--arity", "4", "--gap", "6", "--name", "Z1"], capsys)
    rc, out, _ = run(["compare-functions", "--zoo", "Z1", "--f", "succ", "--g", "n+5"], capsys)
    assert out.strip() == "f ≺ g at cut 0"
    rc, out, _ = run(["--json", "gauge", "--zoo", "Z1", "--fn", '{"kind": "affine", "a": 1, "b": 5}'], capsys)
    assert sorted(json.loads(out)["front"]["nodes"]) == ["v0", "v1"]
    rc, out, _ = run(["--json", "verify", "leq", "--zoo", "Z1", "--f", "succ", "--g", "n+5"], capsys)
    assert rc == 0 and json.loads(out)["intervals"] == [[0, 2]]
    rc, out, _ = run(["verify", "not", "--zoo", "Z1", "--f", "succ", "--g", "n+5", "--J", "4"], capsys)
    assert rc == 1
    rc, out, _ = run(["compare-fronts", "--zoo", "Z1", "--F", "ext", "--G", "roots"], capsys)
    assert out.strip() == "F ≺ G at cut 0"


def test_zoo_transforms(ws, capsys):
    run(["gen", "--creatures", "10", "--depth", "1", "--arity", "6", "--gap", "3", "--out", "s.json"], capsys)
    assert run(["glue", "--in", "s.json", "--cuts", "0,5,10", "--out", "g.json"], capsys)[0] == 0
    assert run(["check-le", "--in", "g.json", "--of", "s.json", "--strict"], capsys)[0] == 0
    assert run(["drop", "--in", "s.json", "--keep", "0,2,4", "--out", "d.json"], capsys)[0] == 0
    assert run(["check-le", "--in", "s.json", "--of", "d.json"], capsys)[0] == 1
    assert run(["limit", "s.json", "g.json", "--out", "l.json"], capsys)[0] == 0
    rc, out, _ = run(["--json", "homogenize", "--in", "s.json", "--kind", "branch", "--seed", "2"], capsys)
    assert rc == 0 and json.loads(out)["creatures"] >= 1


def test_le_flags(ws, capsys):
    rc, out, _ = run(["le", "--f", "n+5", "--g", "succ", "--kmax", "16", "--bound", "1000"], capsys)
    assert rc == 0 and "k=5" in out
    rc, out, _ = run(["le", "--f", "2^n", "--g", "succ", "--kmax", "3", "--bound", "100"], capsys)
    assert rc == 1


def test_build_and_report(ws, capsys):
    (ws / "d.json").write_text(json.dumps([
        {"kind": "make-strong", "fn": {"kind": "affine", "a": 1, "b": 5}},
        {"kind": "root-shift"}]))
    rc, out, _ = run(["build", "--demands", "d.json", "--seed-len", "64", "--out", "chain.json"], capsys)
    assert rc == 0 and "2/2" in out
    rc, out, _ = run(["report", "--chain", "chain.json"], capsys)
    assert rc == 0 and "chain ok" in out


def test_pipeline_examples(ws, capsys):
    script = {"steps": [
        {"op": "gen", "name": "Z1", "shape": {"creatures": 2, "depth": 1, "arity": 4, "gap": 6}},
        {"op": "gauge", "zoo": "Z1", "fn": {"kind": "successor"}, "name": "f₁"},
        {"op": "gauge", "zoo": "Z1", "fn": {"kind": "affine", "a": 1, "b": 5}, "name": "f₂"},
        {"op": "compare", "zoo": "Z1", "f": "f₁", "g": "f₂"}]}
    rep = run_pipeline(script, Workspace())
    assert rep["ok"] and rep["steps"][-1]["summary"] == "f₁ ≺ f₂ at cut 0"
    assert (ws / "ws" / "Z1.json").is_file()
    empty = run_pipeline([], Workspace())
    assert empty == {"ok": True, "steps": []}
    bad = run_pipeline([{"op": "gen", "name": "a", "shape": {}},
                        {"op": "compare", "zoo": "nope", "f": "succ", "g": "n+5"}])
    assert not bad["ok"] and bad["error"]["step"] == 1 and "nope" in bad["error"]["message"]
    (ws / "e.json").write_text("[]")
    assert run(["pipeline", "e.json"], capsys)[0] == 0


def test_selftest_quick_subset(ws, capsys):
    rc, out, _ = run(["selftest", "--only", "4"], capsys)
    assert rc == 0 and "[PASS]  4" in out


def test_selftest_reports_injected_fault(ws, capsys):
    from creature_lab import faults
    try:
        rc, out, _ = run(["selftest", "--only", "8", "--inject", "skip-disjoint"], capsys)
    finally:
        faults.disable()
    assert rc == 1 and "strict ≦ accepted a recycled internal node" in out


def test_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "creature_lab.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "selftest" in r.stdout
