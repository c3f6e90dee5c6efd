"""Protocol driver: single runs, the increasing-T search, result records."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import mps as mps_backend
from . import statevector as sv_backend
from .graphs import Graph, bits_to_str, energies_of_samples, graph_id
from .schedule import FaaParams, build_layer_plan

SCHEMA_VERSION = 1
DEFAULT_T_MAX = 200


def derive_seed(*parts) -> int:
    """Stable 64-bit stream seed from (master_seed, graph_id, T, ...)."""
    msg = "|".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(msg).digest()[:8], "little")


def approx_ratio(best_energy: int, target_energy: int, n_vertices: int) -> Fraction:
    """Exact ratio (-best + 3L/2) / (-target + 3L/2).

    For 3-regular graphs this equals best_cut / max_cut. target_energy is
    the certified minimum, so the ratio lies in [0, 1] and increases as
    better assignments are found.
    """
    num = Fraction(3 * n_vertices, 2) - best_energy
    den = Fraction(3 * n_vertices, 2) - target_energy
    if den <= 0:
        raise ValueError("target energy leaves a non-positive denominator")
    return num / den


@dataclass
class RunRecord:
    graph_id: str
    n_vertices: int
    n: float
    t: float
    n_steps: int
    backend: str
    bond_dim: int | None
    shots: int
    seed: int
    min_energy: int  # best energy among this run's samples
    best_energy: int  # best seen so far in the enclosing search
    approx_ratio: float | None
    best_assignment: str
    max_chi: int | None
    discarded_weight: float | None
    wall_time_s: float
    truncation_steps: list | None = None

    def to_json_dict(self, include_steps: bool = False) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "graph_id": self.graph_id,
            "n_vertices": self.n_vertices,
            "n": self.n,
            "t": self.t,
            "n_steps": self.n_steps,
            "backend": self.backend,
            "bond_dim": self.bond_dim,
            "shots": self.shots,
            "seed": self.seed,
            "min_energy": self.min_energy,
            "best_energy": self.best_energy,
            "approx_ratio": self.approx_ratio,
            "best_assignment": self.best_assignment,
            "max_chi": self.max_chi,
            "discarded_weight": self.discarded_weight,
            "wall_time_s": self.wall_time_s,
        }
        if include_steps and self.truncation_steps is not None:
            d["truncation_steps"] = self.truncation_steps
        return d


@dataclass
class SearchRecord:
    graph_id: str
    n_vertices: int
    n: float
    backend: str
    bond_dim: int | None
    t_star: float | None
    succeeded: bool
    t_max: float
    n_t_values: int
    total_shots: int
    target_energy: int | None
    verification: str  # "internal" | "sidecar" | "unverified"
    wall_time_s: float

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "record": "search",
            "graph_id": self.graph_id,
            "n_vertices": self.n_vertices,
            "n": self.n,
            "backend": self.backend,
            "bond_dim": self.bond_dim,
            "t_star": self.t_star,
            "succeeded": self.succeeded,
            "t_max": self.t_max,
            "n_t_values": self.n_t_values,
            "total_shots": self.total_shots,
            "target_energy": self.target_energy,
            "verification": self.verification,
            "wall_time_s": self.wall_time_s,
        }


def run_single_t(
    g: Graph,
    params: FaaParams,
    t: float,
    *,
    target_energy: int | None = None,
    prev_best: int | None = None,
    layout: str = "identity",
    gid: str | None = None,
    keep_steps: bool = False,
) -> RunRecord:
    """One full run at total time t: evolve, sample, score.

    The sampling stream is seeded from (params.seed, graph id, t), so records
    are reproducible independently of which other t values ran before.
    """
    gid = gid if gid is not None else graph_id(g)
    plan = build_layer_plan(params.n, t)
    rng = np.random.default_rng(derive_seed(params.seed, gid, float(t)))
    t0 = time.perf_counter()
    if params.backend == "statevector":
        state = sv_backend.run_plan(g, plan)
        bits = sv_backend.sample(state, params.shots, rng)
        max_chi = None
        discarded = None
        steps = None
    else:
        psi, report = mps_backend.run_plan(g, plan, params.bond_dim, layout=layout)
        bits = psi.sample(params.shots, rng)
        max_chi = report.max_chi
        discarded = report.total_discarded_weight
        steps = [
            {"step": s.step, "max_chi": s.max_chi, "discarded_weight": s.discarded_weight}
            for s in report.steps
        ]
    wall = time.perf_counter() - t0
    energies = energies_of_samples(g, bits)
    i_best = int(np.argmin(energies))
    min_e = int(energies[i_best])
    best = min_e if prev_best is None else min(min_e, prev_best)
    if target_energy is not None and min_e < target_energy:
        raise ValueError(
            f"sampled energy {min_e} beats the claimed optimum {target_energy}; the reference is wrong"
        )
    ratio = None if target_energy is None else float(approx_ratio(best, target_energy, g.n_vertices))
    return RunRecord(
        graph_id=gid,
        n_vertices=g.n_vertices,
        n=params.n,
        t=float(t),
        n_steps=plan.n_steps,
        backend=params.backend,
        bond_dim=params.bond_dim,
        shots=params.shots,
        seed=params.seed,
        min_energy=min_e,
        best_energy=best,
        approx_ratio=ratio,
        best_assignment=bits_to_str(bits[i_best]),
        max_chi=max_chi,
        discarded_weight=discarded,
        wall_time_s=wall,
        truncation_steps=steps if keep_steps else None,
    )


def t_schedule(n: float, t_max: float, tol: float = 1e-9) -> list[float]:
    """Integer total times 1..t_max that give a whole number of steps."""
    out = []
    for t in range(1, int(t_max) + 1):
        prod = n * t
        if abs(prod - round(prod)) <= tol and round(prod) >= 1:
            out.append(float(t))
    return out


def run_search(
    g: Graph,
    params: FaaParams,
    *,
    target_energy: int | None,
    verification: str,
    t_values: list[float] | None = None,
    t_max: float = DEFAULT_T_MAX,
    layout: str = "identity",
    keep_steps: bool = False,
) -> tuple[list[RunRecord], SearchRecord]:
    """Increase T along the schedule until a sample hits target_energy.

    target_energy None (verification "unverified") never stops early: every
    scheduled T runs and the search reports succeeded False. Stopping rule:
    the first T whose own samples reach the target; the running best over
    earlier T values does not count as a hit.
    """
    if verification not in ("internal", "sidecar", "unverified"):
        raise ValueError(f"unknown verification {verification!r}")
    if (target_energy is None) != (verification == "unverified"):
        raise ValueError("target_energy must be given exactly when verification is not 'unverified'")
    if t_values is None:
        t_values = t_schedule(params.n, t_max)
    if not t_values:
        raise ValueError(f"no valid T values up to t_max={t_max} for n={params.n}")
    gid = graph_id(g)
    t0 = time.perf_counter()
    records: list[RunRecord] = []
    best: int | None = None
    t_star: float | None = None
    for t in t_values:
        rec = run_single_t(
            g,
            params,
            t,
            target_energy=target_energy,
            prev_best=best,
            layout=layout,
            gid=gid,
            keep_steps=keep_steps,
        )
        records.append(rec)
        best = rec.best_energy
        if target_energy is not None and rec.min_energy == target_energy:
            t_star = t
            break
    search = SearchRecord(
        graph_id=gid,
        n_vertices=g.n_vertices,
        n=params.n,
        backend=params.backend,
        bond_dim=params.bond_dim,
        t_star=t_star,
        succeeded=t_star is not None,
        t_max=float(max(t_values)),
        n_t_values=len(records),
        total_shots=params.shots * len(records),
        target_energy=target_energy,
        verification=verification,
        wall_time_s=time.perf_counter() - t0,
    )
    return records, search


def write_jsonl(records, path_or_fh, include_steps: bool = False) -> None:
    """Append records (RunRecord or SearchRecord) as JSON lines."""

    def dump(fh):
        for rec in records:
            if isinstance(rec, RunRecord):
                d = rec.to_json_dict(include_steps=include_steps)
            else:
                d = rec.to_json_dict()
            fh.write(json.dumps(d, sort_keys=True) + "\n")

    if hasattr(path_or_fh, "write"):
        dump(path_or_fh)
    else:
        with open(path_or_fh, "a") as fh:
            dump(fh)


def read_jsonl(path) -> list[dict]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
