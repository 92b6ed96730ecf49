"""Command line entry point: ``cqaoa run | solve | verify``.

Exit codes: 0 success, 1 failed invariant check, 2 capacity error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .bench import FAMILIES, ExperimentConfig, run_experiment, solve_graph
from .exceptions import CapacityError, KrylovConvergenceError
from .graph import read_edge_list
from .optimize import OptimizerConfig

EXIT_CHECK_FAILED = 1
EXIT_CAPACITY = 2
EXIT_NUMERICAL = 3


def _optimizer_args(parser):
    parser.add_argument("--p", type=int, default=2, help="QAOA level (default 2)")
    parser.add_argument("--restarts", type=int, default=20)
    parser.add_argument("--max-iters", type=int, default=200)
    parser.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqaoa", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep a graph family and write result files")
    run.add_argument("--config", type=Path, help="JSON experiment config; other flags override it")
    run.add_argument("--family", choices=FAMILIES)
    run.add_argument("--n-min", type=int)
    run.add_argument("--n-max", type=int)
    run.add_argument("--prob", type=float)
    run.add_argument("--k", type=int, nargs="+", help="Johnson subset sizes")
    run.add_argument("--path", help="edge-list file for --family file")
    run.add_argument("--instances", type=int, help="instances per n")
    run.add_argument("--classical-seeds", type=int)
    run.add_argument("--out", type=Path, default=Path("results"))
    _optimizer_args(run)

    solve = sub.add_parser("solve", help="solve one edge-list graph and print a report")
    solve.add_argument("graph", type=Path)
    solve.add_argument("--classical-seeds", type=int, default=1000)
    _optimizer_args(solve)

    verify = sub.add_parser("verify", help="run the invariant checks")
    verify.add_argument("--quick", action="store_true")
    verify.add_argument("--seed", type=int, default=0)
    return parser


def _optimizer_config(args, base: OptimizerConfig | None = None) -> OptimizerConfig:
    base = base or OptimizerConfig()
    return replace(base, p=args.p, restarts=args.restarts, max_iters=args.max_iters, mode=args.mode, seed=args.seed)


def _cmd_run(args):
    data = json.loads(args.config.read_text()) if args.config else {}
    overrides = {
        "family": args.family,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "prob": args.prob,
        "k": args.k,
        "path": args.path,
        "instances_per_point": args.instances,
        "classical_seeds": args.classical_seeds,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if "family" not in data:
        raise SystemExit("cqaoa run: --family or a config file with 'family' is required")
    data["output_dir"] = str(args.out)
    data.setdefault("seed", args.seed)
    config = ExperimentConfig.from_dict(data)
    if not args.config:
        config = replace(config, optimizer=_optimizer_config(args, config.optimizer))
    records = run_experiment(config)
    for r in records:
        print(f"{r.label:>14} #{r.instance:<3} quantum {r.quantum_quality:.3f}  classical {r.classical_quality:.3f}")
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_solve(args):
    graph = read_edge_list(args.graph.read_text())
    res = solve_graph(graph, _optimizer_config(args), args.classical_seeds, args.seed)
    run = res["run"]
    print(f"graph: {graph.n_vertices} vertices, {graph.n_edges} edges")
    print(f"quantum cover: {sorted(res['quantum_cover'])} (size {res['quantum_cover_size']})")
    print(f"minimum cover: {sorted(res['optimal'].cover)} (size {res['optimal'].size})")
    print(f"quantum quality: {res['quantum_quality']:.4f}")
    print(f"classical mean quality: {res['classical_quality']:.4f}")
    print(f"best expectation: {run.best_f:.6f} at betas={run.best_params.betas} gammas={run.best_params.gammas}")
    return 0


def _cmd_verify(args):
    from .verify import run_invariants

    ok = True
    for check in run_invariants(seed=args.seed, quick=args.quick):
        ok &= check.passed
        print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}: {check.detail}")
    return 0 if ok else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = {"run": _cmd_run, "solve": _cmd_solve, "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except KrylovConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
