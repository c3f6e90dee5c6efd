"""Command line interface: gen, solve, run, sweep.

Exit codes: 0 success, 1 completed without verification (no optimum
certificate was available), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import statevector as sv_backend
from .bench import SweepSpec, run_sweep
from .driver import DEFAULT_T_MAX, run_search, run_single_t, write_jsonl
from .exact import ENUM_MAX_VERTICES, OracleBudgetError, max_cut_exact, verify_witness
from .graphs import (
    GraphError,
    generate_3regular,
    graph_id,
    load_graph,
    load_opt,
    save_graph,
    save_opt,
)
from .schedule import FaaParams

ENV_OUT_DIR = "FAACUT_OUT_DIR"


def _default_out_dir() -> str | None:
    return os.environ.get(ENV_OUT_DIR)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="faacut", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="sample random 3-regular graphs")
    g.add_argument("--n-vertices", type=int, required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out-dir", default=_default_out_dir())
    g.add_argument("--solve", action="store_true", help="also write .opt sidecars")
    g.add_argument("--budget-s", type=float, default=None)

    s = sub.add_parser("solve", help="certify the optimum of graph files")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--budget-s", type=float, default=None)

    r = sub.add_parser("run", help="run the protocol on one graph")
    r.add_argument("graph")
    r.add_argument("--n", type=float, required=True, help="Trotter steps per unit time")
    r.add_argument("--t", type=float, default=None, help="single total time T")
    r.add_argument("--t-max", type=float, default=None, help="search T=1.. up to this cap")
    r.add_argument("--backend", choices=["statevector", "mps"], default="statevector")
    r.add_argument("--bond-dim", type=int, default=None)
    r.add_argument("--shots", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--layout", choices=["identity", "rcm"], default="identity")
    r.add_argument("--opt", default=None, help="sidecar file with the certified optimum")
    r.add_argument("--no-verify", action="store_true", help="skip any optimum lookup")
    r.add_argument("--jsonl", default=None, help="append records to this JSON-lines file")
    r.add_argument("--include-steps", action="store_true", help="keep per-step truncation data")
    r.add_argument("--dump-state", default=None, help="write the final statevector (statevector backend, single T)")

    w = sub.add_parser("sweep", help="run a benchmark sweep from a config file")
    w.add_argument("--config", required=True)
    w.add_argument("--out-dir", default=_default_out_dir())
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--resume", action="store_true")
    w.add_argument("--quiet", action="store_true")
    return p


def _cmd_gen(args) -> int:
    if not args.out_dir:
        print(f"gen needs --out-dir (or ${ENV_OUT_DIR})", file=sys.stderr)
        return 2
    os.makedirs(args.out_dir, exist_ok=True)
    unverified = 0
    for i in range(args.count):
        g = generate_3regular(args.n_vertices, args.seed + i)
        gid = graph_id(g)
        path = os.path.join(args.out_dir, f"g_l{args.n_vertices}_i{i}_{gid}.txt")
        save_graph(g, path)
        line = path
        if args.solve:
            try:
                res = max_cut_exact(g, budget_s=args.budget_s)
                save_opt(path + ".opt", res.min_energy, res.witness)
                line += f" min_energy={res.min_energy} max_cut={res.max_cut}"
            except OracleBudgetError as exc:
                print(f"{path}: no certificate: {exc}", file=sys.stderr)
                unverified += 1
        print(line)
    return 1 if unverified else 0


def _cmd_solve(args) -> int:
    unverified = 0
    for path in args.graphs:
        g = load_graph(path)
        try:
            res = max_cut_exact(g, budget_s=args.budget_s)
        except OracleBudgetError as exc:
            print(f"{path}: no certificate: {exc}", file=sys.stderr)
            unverified += 1
            continue
        save_opt(path + ".opt", res.min_energy, res.witness)
        print(f"{path} min_energy={res.min_energy} max_cut={res.max_cut} method={res.method}")
    return 1 if unverified else 0


def _resolve_target(args, g) -> tuple[int | None, str]:
    if args.no_verify:
        return None, "unverified"
    opt_path = args.opt if args.opt else args.graph + ".opt"
    if os.path.exists(opt_path):
        target, bits = load_opt(opt_path, g.n_vertices)
        if not verify_witness(g, bits, target):
            raise GraphError(f"{opt_path}: witness does not reproduce the claimed optimum")
        return target, "sidecar"
    if args.opt:
        raise GraphError(f"{args.opt}: sidecar not found")
    if g.n_vertices <= ENUM_MAX_VERTICES:
        return max_cut_exact(g).min_energy, "internal"
    print(f"no sidecar and {g.n_vertices} vertices is past the oracle cap; running unverified", file=sys.stderr)
    return None, "unverified"


def _cmd_run(args) -> int:
    if (args.t is None) == (args.t_max is None):
        print("run needs exactly one of --t or --t-max", file=sys.stderr)
        return 2
    g = load_graph(args.graph)
    target, verification = _resolve_target(args, g)
    params = FaaParams(
        n=args.n,
        T=args.t if args.t is not None else 1.0 / args.n,
        shots=args.shots,
        seed=args.seed,
        backend=args.backend,
        bond_dim=args.bond_dim,
    )
    if args.dump_state and (args.backend != "statevector" or args.t is None):
        print("--dump-state needs the statevector backend and a single --t", file=sys.stderr)
        return 2
    if args.t is not None:
        rec = run_single_t(
            g,
            params,
            args.t,
            target_energy=target,
            layout=args.layout,
            keep_steps=args.include_steps,
        )
        if args.dump_state:
            from .schedule import build_layer_plan

            state = sv_backend.run_plan(g, build_layer_plan(args.n, args.t))
            sv_backend.save_state(state, args.dump_state)
        out = [rec]
        print(json.dumps(rec.to_json_dict(include_steps=args.include_steps), sort_keys=True))
    else:
        records, search = run_search(
            g,
            params,
            target_energy=target,
            verification=verification,
            t_max=args.t_max,
            layout=args.layout,
            keep_steps=args.include_steps,
        )
        out = [*records, search]
        print(json.dumps(search.to_json_dict(), sort_keys=True))
    if args.jsonl:
        write_jsonl(out, args.jsonl, include_steps=args.include_steps)
    return 0 if verification != "unverified" else 1


def _cmd_sweep(args) -> int:
    if not args.out_dir:
        print(f"sweep needs --out-dir (or ${ENV_OUT_DIR})", file=sys.stderr)
        return 2
    with open(args.config) as fh:
        spec = SweepSpec.from_json_dict(json.load(fh))
    progress = None if args.quiet else lambda msg: print(msg, file=sys.stderr)
    rows, aggs = run_sweep(spec, out_dir=args.out_dir, jobs=args.jobs, resume=args.resume, progress=progress)
    for a in aggs:
        print(json.dumps(a, sort_keys=True))
    unverified = any(r["verification"] == "unverified" for r in rows)
    return 1 if unverified else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.cmd == "gen":
            return _cmd_gen(args)
        if args.cmd == "solve":
            return _cmd_solve(args)
        if args.cmd == "run":
            return _cmd_run(args)
        if args.cmd == "sweep":
            return _cmd_sweep(args)
    except (GraphError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleBudgetError as exc:
        print(f"no certificate: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
