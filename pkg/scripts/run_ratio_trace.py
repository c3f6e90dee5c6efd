"""Approximation-ratio traces: run EVERY scheduled T on a handful of
instances instead of stopping at the first optimum, so the full r(T) curve
is visible. One JSONL per (instance, backend) under --out.

The search driver stops at T*, which is right for benchmarks but hides the
tail; here prev_best is threaded through the grid by hand.
"""

import argparse
import os
import time

from faacut.driver import derive_seed, run_single_t, t_schedule, write_jsonl
from faacut.exact import max_cut_exact
from faacut.graphs import generate_3regular, graph_id
from faacut.schedule import FaaParams


def trace(g, params, target, t_values):
    gid = graph_id(g)
    records, best = [], None
    for t in t_values:
        rec = run_single_t(g, params, t, target_energy=target, prev_best=best, gid=gid)
        records.append(rec)
        best = rec.best_energy
    return records


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, default=14)
    ap.add_argument("--instances", type=int, default=4)
    ap.add_argument("--n", type=float, default=4.0)
    ap.add_argument("--t-max", type=float, default=40.0)
    ap.add_argument("--bond-dims", type=int, nargs="*", default=[2, 4],
                    help="MPS caps to trace alongside the statevector run")
    ap.add_argument("--shots", type=int, default=1000)
    ap.add_argument("--out", default="out/ratio_trace")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    t_values = t_schedule(args.n, args.t_max)
    for i in range(args.instances):
        g = generate_3regular(args.l, derive_seed(args.seed, "trace", args.l, i))
        target = max_cut_exact(g).min_energy
        runs = [("sv", FaaParams(n=args.n, T=t_values[0], shots=args.shots, seed=args.seed))]
        runs += [
            (f"d{d}", FaaParams(n=args.n, T=t_values[0], shots=args.shots,
                                seed=args.seed, backend="mps", bond_dim=d))
            for d in args.bond_dims
        ]
        for label, params in runs:
            t0 = time.time()
            records = trace(g, params, target, t_values)
            path = os.path.join(args.out, f"trace_l{args.l}_i{i}_{label}.jsonl")
            write_jsonl(records, path)
            hit = next((r.t for r in records if r.min_energy == target), None)
            print(f"instance {i} {label}: first optimum at T={hit} "
                  f"({len(records)} runs, {time.time() - t0:.1f}s) -> {path}")


if __name__ == "__main__":
    main()
