"""T* campaign: anneal time needed before sampling lands on the optimum.

Writes per-cell CSVs plus instances.csv / aggregate.csv under --out, so an
interrupted run can be resumed with --resume. The "sv" preset is the
small-size baseline, "mps" pushes past exact-diagonalization sizes at low
bond dimension, "quick" is a smoke run for checking the pipeline.
"""

import argparse
import time

from faacut.bench import SweepSpec, run_sweep, tstar_counts, write_csv

PRESETS = {
    "quick": SweepSpec(
        kind="tstar", l_values=(8, 10), n_values=(4.0,), bond_dims=(None,),
        instances=5, t_max=50.0,
    ),
    "sv": SweepSpec(
        kind="tstar", l_values=(8, 10, 12, 14, 16), n_values=(4.0,),
        bond_dims=(None,), instances=50, t_max=50.0,
    ),
    "mps": SweepSpec(
        kind="tstar", l_values=(16, 20, 24), n_values=(4.0,),
        bond_dims=(2, 4, 8), instances=20, t_max=120.0,
    ),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", choices=sorted(PRESETS), default="quick")
    ap.add_argument("--out", default=None, help="output directory (default out/tstar_<preset>)")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--resume", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    spec = PRESETS[args.preset]
    if args.seed != spec.master_seed:
        spec = SweepSpec(**{**spec.to_json_dict(), "master_seed": args.seed})
    out = args.out or f"out/tstar_{args.preset}"

    t0 = time.time()
    rows, aggs = run_sweep(spec, out_dir=out, jobs=args.jobs, resume=args.resume, progress=print)
    write_csv(f"{out}/tstar_counts.csv", tstar_counts(rows),
              ["n_vertices", "bond_dim", "t_star", "count"])
    print(f"{len(rows)} instances in {time.time() - t0:.1f}s -> {out}")
    for a in aggs:
        print(
            f"  L={a['n_vertices']:>3} D={a['bond_dim'] or 'sv':>3} "
            f"success={a['success_rate']:.2f} mean T*={a['mean_t_star']}"
        )


if __name__ == "__main__":
    main()
