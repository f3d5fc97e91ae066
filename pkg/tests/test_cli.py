"""Command-line surface: exit codes, emitted files, manifests and
reproducibility."""

import json
from pathlib import Path

import pytest

from sunlab.cli import run


def read(path: Path):
    return json.loads(path.read_text())


def test_gen_writes_structure_and_manifest(tmp_path):
    code = run(["gen", "--id", "knfree:3", "--size", "12", "--seed", "5",
                "--out", str(tmp_path)])
    assert code == 0
    data = read(tmp_path / "structure.json")
    assert data["size"] == 12
    manifest = read(tmp_path / "gen-manifest.json")
    assert manifest["command"] == "gen"
    assert manifest["seed"] == 5
    assert manifest["exit_code"] == 0


def test_gen_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run(["gen", "--id", "rb-bichrome", "--size", "15", "--seed", "3",
                    "--out", str(out)]) == 0
    assert (a / "structure.json").read_bytes() == (b / "structure.json").read_bytes()


def test_verify_witness_pass_and_fail(tmp_path):
    ok = run(["verify-witness", "--klass", "pure", "--b-size", "3", "--k", "2",
              "--c-size", "7", "--mode", "exhaustive", "--out", str(tmp_path / "p")])
    assert ok == 0
    assert read(tmp_path / "p" / "verdict.json")["passed"] is True

    bad = run(["verify-witness", "--klass", "pure", "--b-size", "3", "--k", "2",
               "--c-size", "6", "--mode", "exhaustive", "--out", str(tmp_path / "f")])
    assert bad == 1
    ce = read(tmp_path / "f" / "counterexample.json")
    assert ce["k"] == 2 and len(ce["sets"]) == 6


def test_enumerate_presentations(tmp_path):
    assert run(["enumerate-presentations", "--size", "2", "--k", "2",
                "--out", str(tmp_path)]) == 0
    data = read(tmp_path / "presentations.json")
    assert data["count"] == 2


def test_enumerate_budget_exit(tmp_path):
    assert run(["enumerate-presentations", "--size", "30", "--k", "2",
                "--out", str(tmp_path)]) == 3


def test_partition_command(tmp_path):
    gen_dir = tmp_path / "g"
    assert run(["gen", "--id", "knfree:3", "--size", "30", "--seed", "2",
                "--out", str(gen_dir)]) == 0
    out = tmp_path / "p"
    assert run(["partition", "--structure", str(gen_dir / "structure.json"),
                "--scheme", "neighbourhood", "--anchor", "0",
                "--klass", "knfree:3", "--probes", "k2", "--base-bound", "1",
                "--out", str(out)]) == 0
    part = read(out / "partition.json")
    assert sorted(v for b in part["blocks"] for v in b) == list(range(30))
    report = read(out / "report.json")
    assert report["blocks"][1]["probe_embeds"] == [False]


def test_partition_csv(tmp_path):
    gen_dir = tmp_path / "g"
    run(["gen", "--id", "rb-bichrome", "--size", "12", "--seed", "2",
         "--out", str(gen_dir)])
    out = tmp_path / "c"
    assert run(["partition", "--structure", str(gen_dir / "structure.json"),
                "--scheme", "first-edge-colour", "--klass", "rb-bichrome",
                "--format", "csv", "--out", str(out)]) == 0
    assert (out / "report.csv").read_text().startswith("block,kind")


def test_encode_and_sunflower_check(tmp_path):
    gen_dir = tmp_path / "g"
    run(["gen", "--id", "pure-set", "--size", "4", "--seed", "1",
         "--out", str(gen_dir)])
    (tmp_path / "col.json").write_text(json.dumps({"values": [0, 0, 1, 2]}))
    enc = tmp_path / "enc"
    assert run(["encode", "--structure", str(gen_dir / "structure.json"),
                "--colouring", str(tmp_path / "col.json"), "--out", str(enc)]) == 0
    pres = read(enc / "presentation.json")
    assert pres["k"] == 2
    chk = tmp_path / "chk"
    assert run(["sunflower-check", "--structure", str(gen_dir / "structure.json"),
                "--presentation", str(enc / "presentation.json"),
                "--target", "pure:2", "--out", str(chk)]) == 0
    certs = read(chk / "certificates.json")
    assert certs["count"] >= 1


def test_hypergraph_roundtrip(tmp_path):
    gen_dir = tmp_path / "h"
    assert run(["hypergraph", "generate", "--n", "2", "--s", "1", "--g", "4",
                "--seed", "7", "--out", str(gen_dir)]) == 0
    hpath = gen_dir / "hypergraph.json"
    girth_dir = tmp_path / "girth"
    assert run(["hypergraph", "girth", "--input", str(hpath), "--cap", "3",
                "--out", str(girth_dir)]) == 0
    assert read(girth_dir / "girth.json")["girth"] is None  # none below cap
    adv = tmp_path / "adv"
    code = run(["hypergraph", "adversary", "--input", str(hpath), "--s", "1",
                "--mode", "random", "--trials", "60", "--seed", "0",
                "--out", str(adv)])
    assert code in (0, 1)


def test_build_extract_verify_roundtrip(tmp_path):
    chain_dir = tmp_path / "chain"
    assert run(["build-witness", "--klass", "graphs", "--target", "k2",
                "--k", "2", "--seed", "1", "--out", str(chain_dir)]) == 0
    chain = read(chain_dir / "chain.json")
    top_size = chain["levels"][-1]["structure"]["size"]
    sets = [[2 * v, 2 * v + 1] for v in range(top_size)]
    (tmp_path / "pres.json").write_text(json.dumps({"k": 2, "sets": sets}))
    ext = tmp_path / "ext"
    assert run(["extract", "--chain", str(chain_dir / "chain.json"),
                "--presentation", str(tmp_path / "pres.json"),
                "--out", str(ext)]) == 0
    cert = read(ext / "certificate.json")
    assert cert["centre"] == []
    ver = tmp_path / "ver"
    structure_file = tmp_path / "top.json"
    structure_file.write_text(json.dumps(chain["levels"][-1]["structure"]))
    assert run(["verify-cert", "--cert", str(ext / "certificate.json"),
                "--target", "k2", "--structure", str(structure_file),
                "--presentation", str(tmp_path / "pres.json"),
                "--out", str(ver)]) == 0
    trace_dir = tmp_path / "trace"
    assert run(["verify-trace", "--chain", str(chain_dir / "chain.json"),
                "--presentation", str(tmp_path / "pres.json"),
                "--trace", str(ext / "trace.json"), "--out", str(trace_dir)]) == 0


def test_extract_failure_exit_code(tmp_path):
    # a 6-vertex pure-set top admits the two-triangle presentation, which
    # carries no sunflower triple: extraction must exit 4 and hand the
    # presentation back
    chain_dir = tmp_path / "chain"
    assert run(["build-witness", "--klass", "pure", "--target", "pure:3",
                "--k", "2", "--seed", "0", "--c", "2",
                "--out", str(chain_dir)]) == 0
    chain = read(chain_dir / "chain.json")
    assert chain["levels"][-1]["structure"]["size"] == 6
    pres = {"k": 2, "sets": [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]}
    (tmp_path / "pres.json").write_text(json.dumps(pres))
    out = tmp_path / "ext"
    assert run(["extract", "--chain", str(chain_dir / "chain.json"),
                "--presentation", str(tmp_path / "pres.json"),
                "--out", str(out)]) == 4
    ce = read(out / "counterexample.json")
    assert ce["sets"] == pres["sets"]


def test_check_3dap_exit_codes(tmp_path):
    assert run(["check-3dap", "--klass", "knfree:3", "--bound", "1",
                "--out", str(tmp_path / "a")]) == 1
    assert run(["check-3dap", "--klass", "k4h3free", "--bound", "1",
                "--out", str(tmp_path / "b")]) == 0
    assert read(tmp_path / "b" / "3dap.json")["passed"] is True


def test_usage_error_exit_code():
    assert run(["gen", "--size", "5"]) == 2          # missing seed
    assert run(["no-such-command"]) == 2


def test_min_colouring_command(tmp_path):
    gen_dir = tmp_path / "g"
    run(["gen", "--id", "random-graph", "--size", "6", "--seed", "4",
         "--out", str(gen_dir)])
    pattern = {"signature": [{"name": "E", "arity": 2}], "size": 1,
               "relations": {"E": []}}
    (tmp_path / "pattern.json").write_text(json.dumps(pattern))
    qtype = {"parameters": [0],
             "positives": [["E", [-1, 0]], ["E", [0, -1]]]}
    (tmp_path / "type.json").write_text(json.dumps(qtype))
    out = tmp_path / "mc"
    assert run(["min-colouring", "--structure", str(gen_dir / "structure.json"),
                "--pattern", str(tmp_path / "pattern.json"),
                "--type", str(tmp_path / "type.json"), "--out", str(out)]) == 0
    col = read(out / "colouring.json")
    assert len(col["values"]) == 6


def test_open_set_command(tmp_path):
    gen_dir = tmp_path / "g"
    run(["gen", "--id", "random-graph", "--size", "6", "--seed", "4",
         "--out", str(gen_dir)])
    qtype = {"parameters": [0],
             "positives": [["E", [-1, 0]], ["E", [0, -1]]]}
    (tmp_path / "type.json").write_text(json.dumps(qtype))
    out = tmp_path / "os"
    assert run(["open-set", "--structure", str(gen_dir / "structure.json"),
                "--params", "0", "--type", str(tmp_path / "type.json"),
                "--out", str(out)]) == 0
    data = read(out / "open_set.json")
    assert isinstance(data["vertices"], list)
