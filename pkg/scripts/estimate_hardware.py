"""Back-of-envelope hardware cost table for the annealing circuit.

Prints gate counts, colored depth and projected runtime for a ladder of
sizes, then the noiseless-shot fraction over a grid of per-gate error
rates. Numbers come straight from the resource model, no simulation.
"""

import argparse
import math

from faacut.bench import estimate_resources, noiseless_fraction
from faacut.graphs import generate_3regular


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, nargs="+", default=[100, 300, 1000])
    ap.add_argument("--t", type=float, default=100.0)
    ap.add_argument("--n", type=float, default=1.0)
    ap.add_argument("--kappa", type=float, default=12.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'L':>6} {'edges':>7} {'steps':>6} {'colors':>6} {'depth':>8} "
          f"{'2q gates':>10} {'kappa*L*T':>10} {'runtime':>9}")
    for lv in args.l:
        g = generate_3regular(lv, args.seed)
        est = estimate_resources(g, args.n, args.t, kappa=args.kappa)
        print(f"{lv:>6} {est.n_edges:>7} {est.n_steps:>6} {est.num_colors:>6} "
              f"{est.depth_colored:>8} {est.two_qubit_gates:>10} "
              f"{est.gate_count_scaling:>10.3g} {est.hardware_runtime_s:>8.1f}s")

    biggest = generate_3regular(max(args.l), args.seed)
    gates = estimate_resources(biggest, args.n, args.t, kappa=args.kappa).two_qubit_gates
    print(f"\nnoiseless-shot fraction at L={max(args.l)} ({gates} two-qubit gates):")
    for p in (1e-7, 1e-6, 1e-5, 1e-4):
        f = noiseless_fraction(p, gates)
        need = "-" if f == 0 else f"{math.ceil(1 / f):.2g}"
        print(f"  p={p:.0e}: fraction {f:.3e}, ~{need} shots per clean sample")


if __name__ == "__main__":
    main()
