"""Sweep harness, CSV files, resource estimator."""

import math
import os

import pytest

from faacut.bench import (
    AGGREGATE_COLUMNS,
    INSTANCE_COLUMNS,
    SweepSpec,
    aggregate_rows,
    estimate_resources,
    instance_graph,
    noiseless_fraction,
    read_csv,
    run_sweep,
    tstar_counts,
    write_csv,
)
from faacut.coloring import edge_color
from faacut.graphs import generate_3regular, graph_id


def small_spec(**over):
    base = dict(
        kind="tstar",
        l_values=(8,),
        n_values=(4.0,),
        bond_dims=(None,),
        instances=2,
        shots=300,
        t_max=20.0,
        master_seed=1,
    )
    base.update(over)
    return SweepSpec(**base)


def test_spec_validation():
    with pytest.raises(ValueError):
        small_spec(kind="scan")
    with pytest.raises(ValueError):
        small_spec(l_values=(7,))
    with pytest.raises(ValueError):
        small_spec(instances=0)
    with pytest.raises(ValueError):
        small_spec(bond_dims=())


def test_spec_json_round_trip():
    spec = small_spec(bond_dims=(None, 2), n_values=(0.5, 4.0))
    back = SweepSpec.from_json_dict(spec.to_json_dict())
    assert back == spec
    with pytest.raises(ValueError):
        SweepSpec.from_json_dict({**spec.to_json_dict(), "surprise": 1})


def test_cells_enumeration():
    spec = small_spec(l_values=(8, 10), bond_dims=(None, 2), n_values=(1.0,))
    assert spec.cells() == [(8, None, 1.0), (8, 2, 1.0), (10, None, 1.0), (10, 2, 1.0)]


def test_instance_graphs_deterministic_and_distinct():
    spec = small_spec()
    a = instance_graph(spec, 8, 0)
    b = instance_graph(spec, 8, 0)
    c = instance_graph(spec, 8, 1)
    assert a.edges == b.edges
    assert graph_id(a) != graph_id(c)


def test_csv_round_trip(tmp_path):
    rows = [
        {"a": 1, "b": None, "c": 2.5, "d": True},
        {"a": 0, "b": "x", "c": -1.0, "d": False},
    ]
    path = tmp_path / "t.csv"
    write_csv(path, rows, ["a", "b", "c", "d"])
    back = read_csv(path)
    assert back[0] == {"a": "1", "b": None, "c": "2.5", "d": "true"}
    assert back[1]["d"] == "false"
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1\n")
    with pytest.raises(ValueError):
        read_csv(bad)


def test_aggregate_rows_arithmetic():
    spec = small_spec()
    rows = [
        dict(n_vertices=8, bond_dim=None, n=4.0, succeeded=True, t_star=2.0, depth_nominal=24),
        dict(n_vertices=8, bond_dim=None, n=4.0, succeeded=True, t_star=4.0, depth_nominal=48),
        dict(n_vertices=8, bond_dim=None, n=4.0, succeeded=False, t_star=None, depth_nominal=240),
    ]
    (agg,) = aggregate_rows(spec, rows)
    assert agg["instances"] == 3
    assert agg["n_succeeded"] == 2 and agg["n_failed"] == 1
    assert agg["success_rate"] == pytest.approx(2 / 3)
    assert agg["mean_t_star"] == pytest.approx(3.0)  # over successes only
    assert agg["max_t_star"] == 4.0
    assert agg["mean_depth_nominal"] == pytest.approx((24 + 48 + 240) / 3)
    assert agg["dt"] == 0.25


def test_run_sweep_end_to_end(tmp_path):
    spec = small_spec()
    rows, aggs = run_sweep(spec, out_dir=str(tmp_path), jobs=1)
    assert len(rows) == 2
    assert all(r["verification"] == "internal" for r in rows)
    assert all(r["succeeded"] for r in rows)  # L=8 statevector always solves
    assert len(aggs) == 1 and aggs[0]["success_rate"] == 1.0
    for name in ("instances.csv", "aggregate.csv", "sweep.json"):
        assert (tmp_path / name).exists()
    got_cols = (tmp_path / "instances.csv").read_text().splitlines()[0].split(",")
    assert got_cols == INSTANCE_COLUMNS
    assert (tmp_path / "aggregate.csv").read_text().splitlines()[0].split(",") == AGGREGATE_COLUMNS


def test_run_sweep_resume_reuses_cells(tmp_path):
    spec = small_spec()
    rows1, _ = run_sweep(spec, out_dir=str(tmp_path), jobs=1)
    cell_files = [p for p in os.listdir(tmp_path) if p.startswith("cell_")]
    assert len(cell_files) == 1
    stamp = os.path.getmtime(tmp_path / cell_files[0])
    notes = []
    rows2, aggs2 = run_sweep(spec, out_dir=str(tmp_path), jobs=1, resume=True, progress=notes.append)
    assert os.path.getmtime(tmp_path / cell_files[0]) == stamp  # untouched
    assert any("resumed" in msg for msg in notes)
    keep = ["graph_id", "t_star", "best_energy", "succeeded"]
    assert [{k: r[k] for k in keep} for r in rows2] == [{k: r[k] for k in keep} for r in rows1]
    assert aggs2[0]["n_succeeded"] == 2


def test_run_sweep_parallel_matches_serial(tmp_path):
    spec = small_spec(instances=3)
    rows_serial, _ = run_sweep(spec, jobs=1)
    rows_par, _ = run_sweep(spec, jobs=2)
    keep = ["graph_id", "t_star", "best_energy"]
    assert [{k: r[k] for k in keep} for r in rows_par] == [{k: r[k] for k in keep} for r in rows_serial]


def test_tstar_counts():
    rows = [
        {"n_vertices": 8, "bond_dim": None, "t_star": 2.0},
        {"n_vertices": 8, "bond_dim": None, "t_star": 2.0},
        {"n_vertices": 8, "bond_dim": None, "t_star": 5.0},
        {"n_vertices": 8, "bond_dim": None, "t_star": None},  # capped run
    ]
    counts = tstar_counts(rows)
    assert counts == [
        {"n_vertices": 8, "bond_dim": None, "t_star": 2.0, "count": 2},
        {"n_vertices": 8, "bond_dim": None, "t_star": 5.0, "count": 1},
        {"n_vertices": 8, "bond_dim": None, "t_star": None, "count": 1},
    ]


def test_resource_estimates_named_graphs(k4, petersen):
    m = 8  # n=4, T=2
    est_k4 = estimate_resources(k4, 4.0, 2.0)
    assert est_k4.depth_nominal == 3 * m
    assert est_k4.depth_colored == 3 * m  # K4 is class 1
    assert est_k4.two_qubit_gates == 6 * m
    est_p = estimate_resources(petersen, 4.0, 2.0)
    assert est_p.depth_nominal == 3 * m
    assert est_p.depth_colored == 4 * m  # class 2 costs one extra layer
    assert est_p.num_colors == 4
    # a precomputed coloring short-circuits the search
    col = edge_color(petersen)
    assert estimate_resources(petersen, 4.0, 2.0, coloring=col).depth_colored == 4 * m


def test_resource_scaling_numbers():
    g = generate_3regular(1000, seed=0)
    est = estimate_resources(g, 1.0, 100.0)
    assert est.gate_count_scaling == pytest.approx(1.2e6)
    assert est.two_qubit_gates == 1500 * 100
    # default width L/2 runs one two-qubit layer per matching slot
    assert est.hardware_runtime_s == pytest.approx(est.two_qubit_gates / 500 * 1e-3)
    wide = estimate_resources(g, 1.0, 100.0, parallel_width=1000.0)
    assert wide.hardware_runtime_s == pytest.approx(est.hardware_runtime_s / 2)


def test_noiseless_fraction():
    assert noiseless_fraction(1e-5, 10**6) == pytest.approx(math.exp(-10), rel=1e-2)
    assert noiseless_fraction(0.0, 10**9) == 1.0
    assert noiseless_fraction(0.5, 10) == pytest.approx(2.0**-10, rel=1e-12)
    with pytest.raises(ValueError):
        noiseless_fraction(1.0, 10)
    with pytest.raises(ValueError):
        noiseless_fraction(-0.1, 10)
