"""Readers for the harness output files.

This package is a pure presentation layer: it never touches the simulator,
so everything plotted must arrive through these readers. Wrong or missing
columns fail loudly here rather than as a misleading figure.
"""

import csv
import json

# must track the harness's record schema
SCHEMA_VERSION = 1

INSTANCE_REQUIRED = {
    "kind",
    "n_vertices",
    "backend",
    "bond_dim",
    "n",
    "t_star",
    "succeeded",
    "depth_nominal",
    "wall_time_s",
}

AGGREGATE_REQUIRED = {
    "kind",
    "n_vertices",
    "backend",
    "bond_dim",
    "n",
    "dt",
    "instances",
    "n_succeeded",
    "success_rate",
    "mean_t_star",
    "mean_depth_nominal",
}


def _opt_float(v):
    return None if v in (None, "") else float(v)


def _opt_int(v):
    return None if v in (None, "") else int(v)


def read_records(path):
    """Run records from a JSON-lines file; the search summary row is dropped."""
    out = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            d = json.loads(line)
            v = d.get("schema_version")
            if v != SCHEMA_VERSION:
                raise ValueError(
                    f"{path}:{i + 1}: schema_version {v!r}, this reader expects {SCHEMA_VERSION}"
                )
            if d.get("record") == "search":
                continue
            out.append(d)
    if not out:
        raise ValueError(f"{path}: no run records")
    return out


def _read_csv(path, required):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty csv")
        missing = required - set(reader.fieldnames)
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def read_instances(path):
    """Per-instance sweep rows, typed."""
    out = []
    for r in _read_csv(path, INSTANCE_REQUIRED):
        out.append(
            {
                **r,
                "n_vertices": int(r["n_vertices"]),
                "bond_dim": _opt_int(r["bond_dim"]),
                "n": float(r["n"]),
                "t_star": _opt_float(r["t_star"]),
                "succeeded": r["succeeded"] == "true",
                "depth_nominal": int(r["depth_nominal"]),
                "wall_time_s": float(r["wall_time_s"]),
            }
        )
    return out


def read_aggregate(path):
    """Per-cell summary rows, typed."""
    out = []
    for r in _read_csv(path, AGGREGATE_REQUIRED):
        out.append(
            {
                **r,
                "n_vertices": int(r["n_vertices"]),
                "bond_dim": _opt_int(r["bond_dim"]),
                "n": float(r["n"]),
                "dt": float(r["dt"]),
                "instances": int(r["instances"]),
                "n_succeeded": int(r["n_succeeded"]),
                "success_rate": float(r["success_rate"]),
                "mean_t_star": _opt_float(r["mean_t_star"]),
                "mean_depth_nominal": float(r["mean_depth_nominal"]),
            }
        )
    return out
