"""Command line entry points, exit codes, output files."""

import json
import os

import numpy as np
import pytest

from faacut.cli import main
from faacut.driver import read_jsonl
from faacut.graphs import load_graph, save_graph, save_opt
from faacut.schedule import build_layer_plan
from faacut.statevector import load_state, run_plan


def run_cli(*argv):
    return main([str(a) for a in argv])


def gen_one(tmp_path, n=10, seed=0, solve=True):
    args = ["gen", "--n-vertices", n, "--count", 1, "--seed", seed, "--out-dir", tmp_path]
    if solve:
        args.append("--solve")
    assert run_cli(*args) == 0
    (gpath,) = [p for p in os.listdir(tmp_path) if p.endswith(".txt")]
    return os.path.join(tmp_path, gpath)


def test_gen_writes_graphs_and_certificates(tmp_path, capsys):
    code = run_cli("gen", "--n-vertices", 8, "--count", 3, "--seed", 5, "--out-dir", tmp_path, "--solve")
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    files = sorted(os.listdir(tmp_path))
    assert sum(f.endswith(".txt") for f in files) == 3
    assert sum(f.endswith(".opt") for f in files) == 3
    for f in files:
        if f.endswith(".txt"):
            g = load_graph(tmp_path / f)
            assert g.n_vertices == 8
            assert f.startswith("g_l8_i")
    assert "min_energy=" in lines[0]


def test_gen_distinct_seeds_give_distinct_graphs(tmp_path):
    run_cli("gen", "--n-vertices", 10, "--count", 2, "--out-dir", tmp_path)
    a, b = sorted(p for p in os.listdir(tmp_path) if p.endswith(".txt"))
    assert load_graph(tmp_path / a).edges != load_graph(tmp_path / b).edges


def test_solve_writes_sidecar(tmp_path, capsys, petersen):
    gpath = tmp_path / "pet.txt"
    save_graph(petersen, gpath)
    assert run_cli("solve", gpath) == 0
    out = capsys.readouterr().out
    assert "min_energy=-9" in out and "max_cut=12" in out
    assert (tmp_path / "pet.txt.opt").exists()


def test_run_single_t_with_sidecar(tmp_path, capsys):
    gpath = gen_one(tmp_path)
    code = run_cli("run", gpath, "--n", 4, "--t", 3, "--shots", 200)
    assert code == 0
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert rec["schema_version"] == 1
    assert rec["n_steps"] == 12
    assert rec["backend"] == "statevector"
    assert rec["approx_ratio"] is not None
    assert set(rec) >= {"graph_id", "min_energy", "best_energy", "best_assignment", "wall_time_s"}


def test_run_search_internal_oracle(tmp_path, capsys):
    gpath = gen_one(tmp_path, solve=False)  # no sidecar: falls back to the oracle
    code = run_cli("run", gpath, "--n", 4, "--t-max", 40, "--shots", 1000, "--jsonl", tmp_path / "out.jsonl")
    assert code == 0
    search = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert search["record"] == "search"
    assert search["succeeded"] is True
    assert search["verification"] == "internal"
    rows = read_jsonl(tmp_path / "out.jsonl")
    assert rows[-1]["record"] == "search"
    assert len(rows) == search["n_t_values"] + 1


def test_run_mps_backend(tmp_path, capsys):
    gpath = gen_one(tmp_path)
    code = run_cli(
        "run", gpath, "--n", 4, "--t", 2, "--backend", "mps", "--bond-dim", 2,
        "--shots", 100, "--include-steps",
    )
    assert code == 0
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert rec["bond_dim"] == 2
    assert rec["max_chi"] <= 2
    assert len(rec["truncation_steps"]) == rec["n_steps"]


def test_run_no_verify_exits_1(tmp_path, capsys):
    gpath = gen_one(tmp_path, solve=False)
    code = run_cli("run", gpath, "--n", 1, "--t", 2, "--no-verify", "--shots", 50)
    assert code == 1
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert rec["approx_ratio"] is None


def test_run_flag_validation(tmp_path, capsys):
    gpath = gen_one(tmp_path, solve=False)
    assert run_cli("run", gpath, "--n", 4) == 2  # neither --t nor --t-max
    assert run_cli("run", gpath, "--n", 4, "--t", 2, "--t-max", 5) == 2
    assert run_cli("run", gpath, "--n", 4, "--t", 2, "--opt", tmp_path / "missing.opt") == 2
    assert run_cli("run", gpath, "--n", 4, "--t", 2, "--backend", "mps") == 2  # no bond dim


def test_run_rejects_tampered_sidecar(tmp_path):
    gpath = gen_one(tmp_path)
    opt = gpath + ".opt"
    lines = open(opt).read().splitlines()
    open(opt, "w").write(f"{int(lines[0]) - 2}\n{lines[1]}\n")  # claim a better optimum
    assert run_cli("run", gpath, "--n", 4, "--t", 2) == 2


def test_run_rejects_malformed_graph(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("4 1\n0 0\n")
    assert run_cli("run", bad, "--n", 4, "--t", 2) == 2
    assert run_cli("run", tmp_path / "missing.txt", "--n", 4, "--t", 2) == 2


def test_dump_state_round_trip(tmp_path):
    gpath = gen_one(tmp_path)
    dump = tmp_path / "state.bin"
    assert run_cli("run", gpath, "--n", 2, "--t", 2, "--dump-state", dump) == 0
    got = load_state(dump)
    ref = run_plan(load_graph(gpath), build_layer_plan(2.0, 2.0))
    assert np.allclose(got, ref)
    # refuses under mps or search mode
    assert run_cli("run", gpath, "--n", 2, "--t-max", 4, "--dump-state", dump) == 2
    assert run_cli("run", gpath, "--n", 2, "--t", 2, "--backend", "mps", "--bond-dim", 2, "--dump-state", dump) == 2


def test_sweep_from_config(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({
        "kind": "tstar", "l_values": [8], "n_values": [4.0], "bond_dims": [None],
        "instances": 2, "shots": 300, "t_max": 20.0, "master_seed": 1,
    }))
    out_dir = tmp_path / "out"
    assert run_cli("sweep", "--config", cfg, "--out-dir", out_dir, "--quiet") == 0
    agg = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert agg["instances"] == 2
    assert (out_dir / "aggregate.csv").exists()
    # resume leaves results identical
    assert run_cli("sweep", "--config", cfg, "--out-dir", out_dir, "--resume", "--quiet") == 0


def test_sweep_bad_config(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text("{not json")
    assert run_cli("sweep", "--config", cfg, "--out-dir", tmp_path / "o") == 2
    cfg.write_text(json.dumps({"kind": "tstar"}))
    assert run_cli("sweep", "--config", cfg, "--out-dir", tmp_path / "o") == 2


def test_out_dir_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("FAACUT_OUT_DIR", str(tmp_path / "envout"))
    assert run_cli("gen", "--n-vertices", 8, "--count", 1) == 0
    assert any(f.endswith(".txt") for f in os.listdir(tmp_path / "envout"))
