"""Benchmark harness: instance sweeps over (size, bond dim, rate), resources."""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .coloring import EdgeColoring, edge_color
from .driver import derive_seed, run_search, t_schedule
from .exact import ENUM_MAX_VERTICES, max_cut_exact
from .graphs import Graph, generate_3regular
from .schedule import FaaParams, n_steps_of

INSTANCE_COLUMNS = [
    "kind",
    "graph_id",
    "n_vertices",
    "backend",
    "bond_dim",
    "n",
    "instance_index",
    "target_energy",
    "best_energy",
    "t_star",
    "succeeded",
    "capped",
    "verification",
    "n_t_values",
    "total_shots",
    "depth_nominal",
    "max_chi",
    "discarded_weight",
    "wall_time_s",
]

AGGREGATE_COLUMNS = [
    "kind",
    "n_vertices",
    "backend",
    "bond_dim",
    "n",
    "dt",
    "instances",
    "n_succeeded",
    "n_failed",
    "success_rate",
    "mean_t_star",
    "max_t_star",
    "mean_depth_nominal",
]


@dataclass(frozen=True)
class SweepSpec:
    """One benchmark campaign: a grid of cells, `instances` graphs per cell.

    bond_dims entries are ints for the MPS backend or None for the dense
    statevector. kind "tstar" and "dt" share the machinery; the kind only
    labels rows so downstream plots know which axis was swept.
    """

    kind: str
    l_values: tuple[int, ...]
    n_values: tuple[float, ...]
    bond_dims: tuple[int | None, ...]
    instances: int
    shots: int = 1000
    t_max: float = 200.0
    master_seed: int = 0
    layout: str = "identity"

    def __post_init__(self):
        if self.kind not in ("tstar", "dt"):
            raise ValueError(f"kind must be 'tstar' or 'dt', got {self.kind!r}")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not self.l_values or not self.n_values or not self.bond_dims:
            raise ValueError("l_values, n_values and bond_dims must be non-empty")
        for lv in self.l_values:
            if lv < 4 or lv % 2:
                raise ValueError(f"bad l value {lv}")

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "l_values": list(self.l_values),
            "n_values": list(self.n_values),
            "bond_dims": list(self.bond_dims),
            "instances": self.instances,
            "shots": self.shots,
            "t_max": self.t_max,
            "master_seed": self.master_seed,
            "layout": self.layout,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SweepSpec":
        known = {
            "kind",
            "l_values",
            "n_values",
            "bond_dims",
            "instances",
            "shots",
            "t_max",
            "master_seed",
            "layout",
        }
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown sweep fields {sorted(extra)}")
        missing = {"kind", "l_values", "n_values", "bond_dims", "instances"} - set(d)
        if missing:
            raise ValueError(f"sweep config missing fields {sorted(missing)}")
        return cls(
            kind=d["kind"],
            l_values=tuple(int(x) for x in d["l_values"]),
            n_values=tuple(float(x) for x in d["n_values"]),
            bond_dims=tuple(None if x is None else int(x) for x in d["bond_dims"]),
            instances=int(d["instances"]),
            shots=int(d.get("shots", 1000)),
            t_max=float(d.get("t_max", 200.0)),
            master_seed=int(d.get("master_seed", 0)),
            layout=str(d.get("layout", "identity")),
        )

    def cells(self) -> list[tuple[int, int | None, float]]:
        return [(lv, d, n) for lv in self.l_values for d in self.bond_dims for n in self.n_values]


def instance_graph(spec: SweepSpec, l_value: int, index: int) -> Graph:
    return generate_3regular(l_value, derive_seed(spec.master_seed, "graph", l_value, index))


def _run_cell_instance(args) -> dict:
    spec, l_value, bond_dim, n, index = args
    g = instance_graph(spec, l_value, index)
    if l_value <= ENUM_MAX_VERTICES:
        target = max_cut_exact(g).min_energy
        verification = "internal"
    else:
        target = None
        verification = "unverified"
    backend = "statevector" if bond_dim is None else "mps"
    t_values = t_schedule(n, spec.t_max)
    if not t_values:
        raise ValueError(f"no valid T values up to {spec.t_max} for n={n}")
    params = FaaParams(
        n=n,
        T=t_values[0],
        shots=spec.shots,
        seed=spec.master_seed,
        backend=backend,
        bond_dim=bond_dim,
    )
    records, search = run_search(
        g,
        params,
        target_energy=target,
        verification=verification,
        t_values=t_values,
        layout=spec.layout,
    )
    capped = not search.succeeded
    t_eff = search.t_star if search.succeeded else t_values[-1]
    last = records[-1]
    return {
        "kind": spec.kind,
        "graph_id": search.graph_id,
        "n_vertices": l_value,
        "backend": backend,
        "bond_dim": bond_dim,
        "n": n,
        "instance_index": index,
        "target_energy": target,
        "best_energy": last.best_energy,
        "t_star": search.t_star,
        "succeeded": search.succeeded,
        "capped": capped,
        "verification": verification,
        "n_t_values": search.n_t_values,
        "total_shots": search.total_shots,
        "depth_nominal": 3 * n_steps_of(n, t_eff),
        "max_chi": last.max_chi,
        "discarded_weight": last.discarded_weight,
        "wall_time_s": search.wall_time_s,
    }


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, rows: list[dict], columns: list[str]) -> None:
    """Write rows atomically (rename over the target)."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(row.get(c)) for c in columns) + "\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def read_csv(path) -> list[dict]:
    """Rows as string dicts; empty cells come back as None."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty csv")
    cols = lines[0].split(",")
    out = []
    for ln in lines[1:]:
        vals = ln.split(",")
        if len(vals) != len(cols):
            raise ValueError(f"{path}: row width {len(vals)} != header {len(cols)}")
        out.append({c: (v if v != "" else None) for c, v in zip(cols, vals)})
    return out


def _cell_path(out_dir: str, spec: SweepSpec, l_value: int, bond_dim: int | None, n: float) -> str:
    d = "sv" if bond_dim is None else f"d{bond_dim}"
    return os.path.join(out_dir, f"cell_{spec.kind}_l{l_value}_{d}_n{n!r}.csv")


def aggregate_rows(spec: SweepSpec, rows: list[dict]) -> list[dict]:
    """One summary row per cell; failed instances enter depth means at t_max."""
    cells: dict[tuple, list[dict]] = {}
    for r in rows:
        key = (r["n_vertices"], r["bond_dim"], r["n"])
        cells.setdefault(key, []).append(r)
    out = []
    for (lv, d, n), group in sorted(cells.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), kv[0][2])):
        stars = [r["t_star"] for r in group if r["succeeded"]]
        n_ok = len(stars)
        depths = [r["depth_nominal"] for r in group]
        out.append(
            {
                "kind": spec.kind,
                "n_vertices": lv,
                "backend": "statevector" if d is None else "mps",
                "bond_dim": d,
                "n": n,
                "dt": 1.0 / n,
                "instances": len(group),
                "n_succeeded": n_ok,
                "n_failed": len(group) - n_ok,
                "success_rate": float(Fraction(n_ok, len(group))),
                "mean_t_star": (sum(stars) / n_ok) if n_ok else None,
                "max_t_star": max(stars) if n_ok else None,
                "mean_depth_nominal": sum(depths) / len(depths),
            }
        )
    return out


def run_sweep(
    spec: SweepSpec,
    out_dir: str | None = None,
    jobs: int = 1,
    resume: bool = False,
    progress=None,
) -> tuple[list[dict], list[dict]]:
    """Run every cell of the sweep; returns (instance rows, aggregate rows).

    With out_dir set, each finished cell is written to its own CSV (atomic
    rename, so its presence marks the cell done) plus combined instances.csv,
    aggregate.csv and the sweep config. resume skips cells whose CSV exists.
    """
    all_rows: list[dict] = []
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "sweep.json"), "w") as fh:
            json.dump(spec.to_json_dict(), fh, indent=2, sort_keys=True)
    for lv, d, n in spec.cells():
        cell_file = _cell_path(out_dir, spec, lv, d, n) if out_dir else None
        if resume and cell_file and os.path.exists(cell_file):
            raw = read_csv(cell_file)
            rows = [_coerce_instance_row(r) for r in raw]
            if progress:
                progress(f"cell l={lv} d={d} n={n}: resumed {len(rows)} instances")
        else:
            args = [(spec, lv, d, n, i) for i in range(spec.instances)]
            if jobs > 1:
                with ProcessPoolExecutor(max_workers=jobs) as ex:
                    rows = list(ex.map(_run_cell_instance, args))
            else:
                rows = [_run_cell_instance(a) for a in args]
            if cell_file:
                write_csv(cell_file, rows, INSTANCE_COLUMNS)
            if progress:
                ok = sum(1 for r in rows if r["succeeded"])
                progress(f"cell l={lv} d={d} n={n}: {ok}/{len(rows)} reached the optimum")
        all_rows.extend(rows)
    aggs = aggregate_rows(spec, all_rows)
    if out_dir:
        write_csv(os.path.join(out_dir, "instances.csv"), all_rows, INSTANCE_COLUMNS)
        write_csv(os.path.join(out_dir, "aggregate.csv"), aggs, AGGREGATE_COLUMNS)
    return all_rows, aggs


def _coerce_instance_row(r: dict) -> dict:
    out = dict(r)
    out["n_vertices"] = int(r["n_vertices"])
    out["bond_dim"] = None if r["bond_dim"] is None else int(r["bond_dim"])
    out["n"] = float(r["n"])
    out["instance_index"] = int(r["instance_index"])
    out["target_energy"] = None if r["target_energy"] is None else int(r["target_energy"])
    out["best_energy"] = int(r["best_energy"])
    out["t_star"] = None if r["t_star"] is None else float(r["t_star"])
    out["succeeded"] = r["succeeded"] == "true"
    out["capped"] = r["capped"] == "true"
    out["n_t_values"] = int(r["n_t_values"])
    out["total_shots"] = int(r["total_shots"])
    out["depth_nominal"] = int(r["depth_nominal"])
    out["max_chi"] = None if r["max_chi"] is None else int(r["max_chi"])
    out["discarded_weight"] = None if r["discarded_weight"] is None else float(r["discarded_weight"])
    out["wall_time_s"] = float(r["wall_time_s"])
    return out


def tstar_counts(rows: list[dict]) -> list[dict]:
    """Instance counts per (n_vertices, bond_dim, t_star); failures under None."""
    counts: dict[tuple, int] = {}
    for r in rows:
        key = (r["n_vertices"], r["bond_dim"], r["t_star"])
        counts[key] = counts.get(key, 0) + 1
    return [
        {"n_vertices": lv, "bond_dim": d, "t_star": t, "count": c}
        for (lv, d, t), c in sorted(counts.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), math.inf if kv[0][2] is None else kv[0][2]))
    ]


# -- resource estimates ---------------------------------------------------


@dataclass(frozen=True)
class ResourceEstimate:
    """Circuit-level cost model of one run at total time t.

    depth_nominal counts each step as 3 layers (one X, two parallel ZZ
    sublayers, the idealized count for a 3-edge-colorable graph);
    depth_colored uses the edge coloring actually found, so class-2 graphs
    cost 4 ZZ sublayers per step. Runtime spreads the two-qubit gates over
    parallel_width lanes at per_gate_time_s each.
    """

    n_vertices: int
    n_edges: int
    n_steps: int
    num_colors: int
    depth_nominal: int
    depth_colored: int
    two_qubit_gates: int
    gate_count_scaling: float
    hardware_runtime_s: float


def estimate_resources(
    g: Graph,
    n: float,
    t: float,
    kappa: float = 12.0,
    per_gate_time_s: float = 1e-3,
    parallel_width: float | None = None,
    coloring: EdgeColoring | None = None,
) -> ResourceEstimate:
    m = n_steps_of(n, t)
    if coloring is None:
        # greedy 3-colorings almost never land on big instances and each try
        # costs O(E), so shrink that budget with size; the constructive
        # max_degree+1 fallback still bounds the answer at 4 layers
        budget = min(1000, max(8, 12_000 // max(1, g.n_edges)))
        coloring = edge_color(g, restarts=budget)
    if parallel_width is None:
        parallel_width = g.n_vertices / 2
    if parallel_width <= 0:
        raise ValueError("parallel_width must be positive")
    gates = g.n_edges * m
    return ResourceEstimate(
        n_vertices=g.n_vertices,
        n_edges=g.n_edges,
        n_steps=m,
        num_colors=coloring.num_colors,
        depth_nominal=3 * m,
        depth_colored=coloring.num_colors * m,
        two_qubit_gates=gates,
        gate_count_scaling=kappa * g.n_vertices * t,
        hardware_runtime_s=gates / parallel_width * per_gate_time_s,
    )


def noiseless_fraction(p_gate: float, n_gates: int) -> float:
    """(1 - p)^n computed in the log domain so huge n stays accurate."""
    if not 0.0 <= p_gate < 1.0:
        raise ValueError(f"p_gate must be in [0, 1), got {p_gate}")
    if n_gates < 0:
        raise ValueError("n_gates must be >= 0")
    return math.exp(n_gates * math.log1p(-p_gate))
