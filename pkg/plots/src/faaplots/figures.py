"""The figure families.

Every number on an axis comes straight out of a harness row; the only
arithmetic here is averaging what gets overplotted and clipping zeros out
of log axes. Each function writes the figure to every path it is given
(format from the extension) and returns the plotted series as plain dicts
so tests can check the data without decoding images.

Output bytes are deterministic: fixed style, fixed svg hash salt, no
timestamps in metadata.
"""

import math
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import read_aggregate, read_instances, read_records

FAMILIES = (
    "ratio_vs_T",
    "tstar_histogram",
    "tstar_vs_L",
    "depth_vs_dt",
    "runtime_extrapolation",
)

LOG_FLOOR = 1e-4

plt.rcParams.update(
    {
        "svg.hashsalt": "faaplots",
        "figure.figsize": (4.6, 3.3),
        "figure.dpi": 110,
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.25,
        "grid.linewidth": 0.5,
        "legend.fontsize": 8,
        "savefig.bbox": "tight",
    }
)


def _save(fig, out_paths):
    written = []
    for path in out_paths:
        d = os.path.dirname(os.path.abspath(path))
        os.makedirs(d, exist_ok=True)
        if path.endswith(".svg"):
            # the Date field is the one savefig default that changes run to run
            fig.savefig(path, metadata={"Date": None})
        else:
            fig.savefig(path)
        written.append(path)
    plt.close(fig)
    return written


def _series_label(backend, bond_dim):
    if bond_dim is None or backend == "statevector":
        return "statevector"
    return f"MPS D={bond_dim}"


def plot_ratio_vs_t(records, out_paths, yscale="linear"):
    """Per-instance 1-r(T) traces (faint) with the cross-instance mean (bold).

    records: run-record dicts from read_records, any number of instances and
    backends mixed. Unverified records carry no ratio and are rejected.
    """
    if not records:
        raise ValueError("no records to plot")
    traces = {}
    for r in records:
        if r.get("approx_ratio") is None:
            raise ValueError(f"record for graph {r.get('graph_id')} has no approx_ratio (unverified run?)")
        key = (r["backend"], r["bond_dim"], r["graph_id"])
        traces.setdefault(key, []).append((float(r["t"]), 1.0 - float(r["approx_ratio"])))

    fig, ax = plt.subplots()
    cmap = plt.get_cmap("tab10")
    series = sorted({(b, d) for b, d, _ in traces})
    colors = {sk: cmap(i % 10) for i, sk in enumerate(series)}
    clipped = 0
    floor = LOG_FLOOR if yscale == "log" else None

    def y_of(vals):
        nonlocal clipped
        if floor is None:
            return vals
        out = []
        for v in vals:
            if v < floor:
                clipped += 1
                v = floor
            out.append(v)
        return out

    means = {}
    for sk in series:
        per_t = {}
        for (b, d, gid), pts in traces.items():
            if (b, d) != sk:
                continue
            pts = sorted(pts)
            ts = [t for t, _ in pts]
            ax.plot(ts, y_of([g for _, g in pts]), color=colors[sk], alpha=0.25, lw=0.9)
            for t, gap in pts:
                per_t.setdefault(t, []).append(gap)
        ts = sorted(per_t)
        mean = [float(np.mean(per_t[t])) for t in ts]
        means[sk] = (ts, mean)
        ax.plot(ts, y_of(mean), color=colors[sk], lw=2.0, label=_series_label(*sk))

    ax.set_xlabel("total anneal time T")
    ax.set_ylabel("1 - r(T)")
    if yscale == "log":
        ax.set_yscale("log")
        ax.set_ylim(bottom=LOG_FLOOR / 2)
        if clipped:
            ax.text(
                0.98, 0.95, f"{clipped} zero values clipped to {LOG_FLOOR:g}",
                transform=ax.transAxes, ha="right", va="top", fontsize=7, color="0.35",
            )
    ax.legend(loc="upper right" if yscale == "linear" else "lower left")
    written = _save(fig, out_paths)
    return {
        "means": {(_series_label(*k)): v for k, v in means.items()},
        "n_traces": len(traces),
        "clipped": clipped,
        "written": written,
    }


def plot_tstar_histogram(rows, out_paths, group_by="n_vertices"):
    """Histograms of T* with integer-aligned bins, one panel row per group.

    rows: instance rows from read_instances. Groups without a single
    successful instance are skipped (and reported in the return value).
    """
    if not rows:
        raise ValueError("no rows to plot")
    if group_by not in ("n_vertices", "bond_dim"):
        raise ValueError(f"group_by must be n_vertices or bond_dim, got {group_by!r}")
    groups = {}
    for r in rows:
        groups.setdefault(r[group_by], []).append(r)

    stars_of = {
        g: [r["t_star"] for r in rs if r["succeeded"] and r["t_star"] is not None]
        for g, rs in groups.items()
    }
    keys = sorted(groups, key=lambda g: (g is None, g))
    live = [g for g in keys if stars_of[g]]
    skipped = [g for g in keys if not stars_of[g]]
    if not live:
        raise ValueError("every group is empty: no successful instances")

    t_hi = max(max(s) for g, s in stars_of.items() if s)
    edges = np.arange(0.5, math.ceil(t_hi) + 1.5, 1.0)  # bars centered on integer T
    fig, axes = plt.subplots(len(live), 1, sharex=True, squeeze=False,
                             figsize=(4.6, 1.1 + 1.2 * len(live)))
    out = {}
    for ax, g in zip(axes[:, 0], live):
        counts, _ = np.histogram(stars_of[g], bins=edges)
        n_fail = len(groups[g]) - len(stars_of[g])
        label = f"{group_by}={g if g is not None else 'sv'} (n={len(groups[g])}"
        label += f", {n_fail} unsolved)" if n_fail else ")"
        ax.bar(edges[:-1] + 0.5, counts, width=0.9, color="#4878b0")
        ax.set_ylabel("count")
        ax.text(0.98, 0.85, label, transform=ax.transAxes, ha="right", fontsize=8)
        out[g] = {
            "edges": edges.tolist(),
            "counts": counts.tolist(),
            "n_rows": len(groups[g]),
            "n_failed": n_fail,
        }
    axes[-1, 0].set_xlabel("T* (anneal time to first optimum)")
    written = _save(fig, out_paths)
    return {"groups": out, "skipped": skipped, "written": written}


def plot_tstar_vs_l(agg_rows, out_paths):
    """Mean T* against instance size, one series per backend/bond dimension.

    Cells whose mean_t_star is missing (no instance succeeded) are left out
    of their series and counted in a legend note.
    """
    if not agg_rows:
        raise ValueError("no aggregate rows to plot")
    series = {}
    dropped = 0
    for r in agg_rows:
        key = (r["backend"], r["bond_dim"])
        if r["mean_t_star"] is None:
            dropped += 1
            continue
        series.setdefault(key, []).append((r["n_vertices"], r["mean_t_star"]))
    if not series:
        raise ValueError("no cell has a successful instance")

    fig, ax = plt.subplots()
    out = {}
    for key in sorted(series):
        pts = sorted(series[key])
        label = _series_label(*key)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=4, label=label)
        out[label] = pts
    ax.set_xlabel("L (vertices)")
    ax.set_ylabel("mean T* (anneal time units)")
    title = "anneal time to reach the optimum"
    if dropped:
        title += f" ({dropped} cells without successes skipped)"
    ax.set_title(title, fontsize=9)
    ax.legend()
    written = _save(fig, out_paths)
    return {"series": out, "dropped_cells": dropped, "written": written}


def plot_depth_vs_dt(agg_rows, out_paths):
    """Mean total depth 3*n*T against the Trotter step dt=1/n, per size.

    Uses mean_depth_nominal as aggregated upstream, where unsolved
    instances enter at the search cap.
    """
    if not agg_rows:
        raise ValueError("no aggregate rows to plot")
    series = {}
    for r in agg_rows:
        series.setdefault(r["n_vertices"], []).append((r["dt"], r["mean_depth_nominal"]))

    fig, ax = plt.subplots()
    out = {}
    for lv in sorted(series):
        pts = sorted(series[lv])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "s-", ms=4, label=f"L={lv}")
        out[lv] = pts
    ax.set_xlabel("Trotter step dt = 1/n")
    ax.set_ylabel("mean circuit depth (layers, 3 per step)")
    ax.legend()
    written = _save(fig, out_paths)
    return {"series": out, "written": written}


def plot_runtime_extrapolation(rows, out_paths):
    """Mean simulator wall time per instance against size, log scale."""
    if not rows:
        raise ValueError("no rows to plot")
    cells = {}
    for r in rows:
        cells.setdefault((r["backend"], r["bond_dim"], r["n_vertices"]), []).append(r["wall_time_s"])

    fig, ax = plt.subplots()
    out = {}
    for key in sorted({(b, d) for b, d, _ in cells}):
        pts = sorted(
            (lv, float(np.mean(ws)))
            for (b, d, lv), ws in cells.items()
            if (b, d) == key
        )
        label = _series_label(*key)
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], "^-", ms=4, label=label)
        out[label] = pts
    ax.set_xlabel("L (vertices)")
    ax.set_ylabel("mean wall time per instance (s)")
    ax.legend()
    written = _save(fig, out_paths)
    return {"series": out, "written": written}


@dataclass(frozen=True)
class PlotSpec:
    """One figure to render: family, input files, output base path.

    out is extensionless; render() writes out + '.svg' and out + '.png'.
    yscale applies to the ratio family; group_by to the histogram.
    """

    family: str
    inputs: tuple
    out: str
    yscale: str = "linear"
    group_by: str = "n_vertices"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, know {FAMILIES}")
        if self.yscale not in ("linear", "log"):
            raise ValueError(f"yscale must be linear or log, got {self.yscale!r}")
        if not self.inputs:
            raise ValueError("inputs must be non-empty")


def render(spec: PlotSpec):
    """Load a PlotSpec's inputs and draw its figure as SVG and PNG."""
    outs = [spec.out + ".svg", spec.out + ".png"]
    if spec.family == "ratio_vs_T":
        records = [r for p in spec.inputs for r in read_records(p)]
        return plot_ratio_vs_t(records, outs, yscale=spec.yscale)
    if spec.family == "tstar_histogram":
        rows = [r for p in spec.inputs for r in read_instances(p)]
        return plot_tstar_histogram(rows, outs, group_by=spec.group_by)
    if spec.family == "tstar_vs_L":
        rows = [r for p in spec.inputs for r in read_aggregate(p)]
        return plot_tstar_vs_l(rows, outs)
    if spec.family == "depth_vs_dt":
        rows = [r for p in spec.inputs for r in read_aggregate(p)]
        return plot_depth_vs_dt(rows, outs)
    rows = [r for p in spec.inputs for r in read_instances(p)]
    return plot_runtime_extrapolation(rows, outs)
