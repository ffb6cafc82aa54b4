import io
import json

import pytest

from mimpl import kripke, nd
from mimpl.cli import main
from mimpl.formula import parse, phi, to_text


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_gen_phi1():
    assert run("gen", "phi", "1") == (0, "((((D1->C)->D1)->D1)->C)->C\n", "")


def test_gen_xi():
    code, out, _ = run("gen", "xi", "2")
    assert code == 0 and parse(out.strip()) is not None


def test_prove_and_check_phi2(tmp_path):
    path = tmp_path / "p.json"
    code, _, _ = run("prove", "nd", to_text(phi(2)), "--out", str(path))
    assert code == 0
    p = nd.load_proof(path)
    assert nd.check(p).conclusion is phi(2)
    code, out, _ = run("check", "nd", str(path))
    assert code == 0
    assert "xi(2): 4 @ final" in out
    assert "normal: yes" in out


def test_classical_roundtrip(tmp_path):
    path = tmp_path / "c.json"
    assert run("prove", "nd", to_text(phi(3)), "--mode", "classical", "--out", str(path))[0] == 0
    code, out, _ = run("check", "nd", str(path), "--mode", "classical")
    assert code == 0 and "xi(3): 1 @ final" in out and "not applicable" in out


def test_prove_nd_from_file(tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("A->B->A\n")
    code, out, _ = run("prove", "nd", "@" + str(f))
    assert code == 0
    assert nd.check(nd.proof_from_json(json.loads(out))).conclusion is parse("A->B->A")


def test_prove_nd_refuted():
    code, out, _ = run("prove", "nd", "((A->B)->A)->A", "--cap", "2")
    assert code == 1 and json.loads(out)["outcome"] == "refuted"


def test_prove_nd_truncated():
    code, out, _ = run("prove", "nd", to_text(phi(3)), "--phi-max", "1", "--cap", "3", "--nodes", "2")
    assert code == 3 and json.loads(out)["outcome"] == "truncated"


def test_prove_seq_weak_countermodel():
    code, out, _ = run("prove", "seq", "((A->B)->A)->A", "--variant", "weak", "--countermodel")
    assert code == 1
    assert "w0: V = {}" in out and "w1: V = {A}" in out


def test_prove_seq_strong(tmp_path):
    path = tmp_path / "s.json"
    code, _, _ = run("prove", "seq", to_text(phi(1)), "--variant", "strong", "--out", str(path),
                     "--samples", "20")
    rep = json.loads(path.read_text())
    assert code == 0 and rep["outcome"] == "proved" and rep["random_model_failures"] == 0


def test_prove_seq_weak_phi1_uncertified():
    code, out, _ = run("prove", "seq", to_text(phi(1)), "--variant", "weak", "--countermodel")
    assert code == 1 and "no counter-model certified" in out


def test_countermodel_cmd(tmp_path):
    path = tmp_path / "m.json"
    code, _, _ = run("countermodel", "((A->B)->A)->A", "--out", str(path))
    assert code == 1
    m = kripke.load_model(path)
    assert not kripke.valid_in(m, parse("((A->B)->A)->A"))
    assert run("countermodel", "A->A")[0] == 3


def test_bench_lower():
    code, out, _ = run("bench", "lower", "1", "--cap", "1", "2")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [r["outcome"] for r in rows] == ["refuted", "found"]
    assert all(r["exhausted"] for r in rows)
    assert {"goal", "cap", "outcome", "exhausted", "nodes", "wall_time"} <= set(rows[0])


def test_bench_lower_truncation_is_inconclusive():
    code, out, _ = run("bench", "lower", "3", "--cap", "7", "--nodes", "10")
    assert code == 3 and json.loads(out)["outcome"] == "truncated"


def test_bench_growth():
    code, out, _ = run("bench", "growth", "5", "--jsonl")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["census"] for r in rows] == [2, 4, 8, 16, 32]
    code, out, _ = run("bench", "growth", "3")
    assert code == 0 and out.splitlines()[0].split()[:2] == ["n", "census"]


@pytest.mark.parametrize("fmt", ["latex", "dot"])
def test_export(tmp_path, fmt):
    path = tmp_path / "p.json"
    run("prove", "nd", to_text(phi(1)), "--out", str(path))
    code, out, _ = run("export", str(path), "--format", fmt)
    assert code == 0 and ("prooftree" in out if fmt == "latex" else out.startswith("digraph"))


@pytest.mark.parametrize("argv,kind", [
    (["gen", "phi", "0"], "usage"),
    (["gen", "zeta", "1"], "usage"),
    (["prove", "nd", "(A->"], "syntax"),
    (["check", "nd", "/nonexistent.json"], "io"),
    (["prove", "nd", "@/nonexistent"], "io"),
    (["bench", "lower", "1", "--cap", "0"], "usage"),
    ([], "usage"),
])
def test_errors_are_json_on_stderr(argv, kind):
    code, out, err = run(*argv)
    assert code == 2
    assert json.loads(err)["kind"] == kind


def test_bad_proof_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "elim", "minor": {"kind": "assume", "formula": "A"},
                                "major": {"kind": "assume", "formula": "B"}}))
    code, out, _ = run("check", "nd", str(path))
    assert code == 1 and "invalid proof" in out


def test_seed_env(monkeypatch, tmp_path):
    monkeypatch.setenv("MIMPL_SEED", "5")
    path = tmp_path / "p.json"
    run("prove", "nd", to_text(phi(1)), "--out", str(path))
    a = run("check", "nd", str(path), "--samples", "10")
    b = run("--seed", "5", "check", "nd", str(path), "--samples", "10")
    assert a == b and a[0] == 0


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "mimpl", "gen", "phi", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == to_text(phi(1))
