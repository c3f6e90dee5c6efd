"""faaplots: render every figure family from a directory of harness outputs.

Expects the layout the bundled fixture uses:
    traces/*.jsonl   full-T run records with approximation ratios
    tstar/instances.csv, tstar/aggregate.csv
    dt/aggregate.csv
Any missing piece just skips the figures that need it.
"""

import argparse
import glob
import os
import sys

from .figures import PlotSpec, render

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


def build_specs(in_dir, out_dir):
    specs = []
    traces = tuple(sorted(glob.glob(os.path.join(in_dir, "traces", "*.jsonl"))))
    if traces:
        specs.append(PlotSpec("ratio_vs_T", traces, os.path.join(out_dir, "ratio_vs_t")))
        specs.append(
            PlotSpec("ratio_vs_T", traces, os.path.join(out_dir, "ratio_vs_t_log"), yscale="log")
        )
    tstar_inst = os.path.join(in_dir, "tstar", "instances.csv")
    if os.path.exists(tstar_inst):
        specs.append(
            PlotSpec("tstar_histogram", (tstar_inst,), os.path.join(out_dir, "tstar_histogram"))
        )
        specs.append(
            PlotSpec(
                "runtime_extrapolation", (tstar_inst,), os.path.join(out_dir, "runtime_vs_l")
            )
        )
    tstar_agg = os.path.join(in_dir, "tstar", "aggregate.csv")
    if os.path.exists(tstar_agg):
        specs.append(PlotSpec("tstar_vs_L", (tstar_agg,), os.path.join(out_dir, "tstar_vs_l")))
    dt_agg = os.path.join(in_dir, "dt", "aggregate.csv")
    if os.path.exists(dt_agg):
        specs.append(PlotSpec("depth_vs_dt", (dt_agg,), os.path.join(out_dir, "depth_vs_dt")))
    return specs


def main(argv=None):
    ap = argparse.ArgumentParser(prog="faaplots", description=__doc__)
    ap.add_argument("--in-dir", default=None, help="harness output directory")
    ap.add_argument("--fixture", action="store_true", help="render the bundled sample data")
    ap.add_argument("--out-dir", required=True)
    args = ap.parse_args(argv)

    if args.fixture == (args.in_dir is not None):
        ap.error("exactly one of --in-dir or --fixture is required")
    in_dir = FIXTURE_DIR if args.fixture else args.in_dir

    specs = build_specs(in_dir, args.out_dir)
    if not specs:
        print(f"no renderable inputs under {in_dir}", file=sys.stderr)
        return 2
    for spec in specs:
        result = render(spec)
        for path in result["written"]:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
