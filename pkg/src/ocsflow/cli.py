"""Command-line front end: validate, gen, solve, and bench subcommands.

Exit codes:
  0 success
  1 I/O error
  2 JSON parse / wire-format error
  3 invalid instance or generator spec
  4 topology not proportional (strict mode)
  5 infeasible decomposition / greedy step
  6 oracle budget exceeded
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bench as bench_mod
from .baselines import BudgetExceeded, GreedyInfeasible, greedy_solve, oracle_min_rewires
from .model import (
    Instance,
    InstanceFormatError,
    ZeroRowError,
    dumps_canonical,
    instance_from_dict,
    instance_to_dict,
    is_feasible,
    validate_instance,
)
from .solver import InfeasibleDecomposition, NotProportional, SolveOptions, solve
from .workload import ChurnConfig, UnbalancedSpec, gen_instance

EXIT_IO = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_NOT_PROPORTIONAL = 4
EXIT_INFEASIBLE = 5
EXIT_BUDGET = 6


def _load_instance(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    except json.JSONDecodeError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    try:
        return instance_from_dict(doc)
    except InstanceFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def cmd_validate(args) -> int:
    instance = _load_instance(args.instance)
    violations = validate_instance(instance)
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        return EXIT_INVALID
    print("VALID")
    return 0


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    violations = validate_instance(instance)
    if violations:
        print(f"invalid instance: {violations[0]}", file=sys.stderr)
        return EXIT_INVALID
    try:
        if args.algo == "bimcf":
            result = solve(
                instance, SolveOptions(strict_proportional=args.strict)
            )
        elif args.algo == "greedy":
            order = (
                [int(v) for v in args.ocs_order.split(",")]
                if args.ocs_order
                else None
            )
            result = greedy_solve(instance, ocs_order=order)
        else:  # oracle
            start = time.perf_counter()
            matching, rewires = oracle_min_rewires(
                instance, node_budget=args.oracle_budget
            )
            elapsed = (time.perf_counter() - start) * 1000.0
            result = None
            doc = {
                "algo": "oracle",
                "rewires": rewires,
                "solve_ms": elapsed,
                "x": matching.tolist(),
                "feasible": True,
            }
    except NotProportional as exc:
        print(f"not proportional: {exc}", file=sys.stderr)
        return EXIT_NOT_PROPORTIONAL
    except (InfeasibleDecomposition, GreedyInfeasible) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    if result is not None:
        ok, why = is_feasible(result.matching, instance.phys, instance.target_logical)
        if not ok:
            print(f"internal error, infeasible output: {why}", file=sys.stderr)
            return EXIT_INFEASIBLE
        doc = {
            "algo": result.algo_name,
            "rewires": result.rewires,
            "solve_ms": result.solver_millis,
            "x": result.matching.tolist(),
            "feasible": True,
        }

    text = dumps_canonical(doc)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return 0


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def cmd_gen(args) -> int:
    cfg = ChurnConfig(churn_fraction=args.churn, seed=args.seed)
    try:
        instance, metadata = gen_instance(
            args.m, args.n, _int_list(args.r), _int_list(args.a_prime),
            _int_list(args.b_prime), cfg,
        )
    except (UnbalancedSpec, ValueError) as exc:
        print(f"invalid generator spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    instance_text = dumps_canonical(instance_to_dict(instance))
    meta_text = dumps_canonical(metadata)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(instance_text)
            with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
                fh.write(meta_text)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(instance_text)
        sys.stdout.write(meta_text)
    return 0


def cmd_bench(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if args.out:
        out = open(args.out, "w", encoding="utf-8")
        err = open(args.out + ".errors.log", "w", encoding="utf-8")
    else:
        out, err = sys.stdout, sys.stderr
    try:
        bench_mod.run_bench(config, out, err, jobs=args.jobs)
    finally:
        if args.out:
            out.close()
            err.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocsflow",
        description="Minimal-rewiring OCS topology solver toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="validate a JSON instance file")
    p_val.add_argument("instance")
    p_val.set_defaults(func=cmd_validate)

    p_solve = sub.add_parser("solve", help="solve an instance")
    p_solve.add_argument("instance")
    p_solve.add_argument("--algo", choices=["bimcf", "greedy", "oracle"], default="bimcf")
    p_solve.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                         help="require a proportional topology (bimcf only)")
    p_solve.add_argument("--ocs-order", default=None,
                         help="comma-separated OCS order for greedy")
    p_solve.add_argument("--oracle-budget", type=int, default=5_000_000)
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a synthetic instance")
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--r", required=True, help="comma-separated, length n")
    p_gen.add_argument("--a-prime", required=True, help="comma-separated, length m")
    p_gen.add_argument("--b-prime", required=True, help="comma-separated, length m")
    p_gen.add_argument("--churn", type=float, default=0.5)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="run a benchmark grid from a config file")
    p_bench.add_argument("config")
    p_bench.add_argument("--out", default=None)
    p_bench.add_argument("--jobs", type=int, default=1)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ZeroRowError as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
