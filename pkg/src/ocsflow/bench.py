"""Benchmark harness: runs solver/baseline grids and emits CSV records.

CSV is the report contract; one row per (instance, algorithm) plus a
commented summary block. Failed runs never become rows; they go to the
error stream."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TextIO

from .baselines import BudgetExceeded, GreedyInfeasible, greedy_solve, oracle_min_rewires
from .model import Instance, is_feasible, rewire_count
from .solver import InfeasibleDecomposition, NotProportional, SolveOptions, solve
from .workload import ChurnConfig, gen_instance

CSV_HEADER = "instance_id,algo,m,n,total_links,rewires,rewire_ratio,solve_ms,mcf_invocations,feasible"

ORACLE_MAX_LINKS = 16


@dataclass
class BenchRecord:
    instance_id: str
    algo: str
    m: int
    n: int
    total_links: int
    rewires: int
    rewire_ratio: float
    solve_ms: float
    mcf_invocations: int
    feasible: bool

    def to_csv_row(self) -> str:
        return ",".join(
            [
                self.instance_id,
                self.algo,
                str(self.m),
                str(self.n),
                str(self.total_links),
                str(self.rewires),
                f"{self.rewire_ratio:.6f}",
                f"{self.solve_ms:.3f}",
                str(self.mcf_invocations),
                "true" if self.feasible else "false",
            ]
        )


def run_algo(instance: Instance, algo: str, oracle_budget: int = 5_000_000):
    """Run one algorithm on one instance; returns a SolveResult-like record."""
    if algo == "bimcf":
        return solve(instance, SolveOptions())
    if algo == "greedy":
        return greedy_solve(instance)
    if algo == "oracle":
        start = time.perf_counter()
        matching, rewires = oracle_min_rewires(instance, node_budget=oracle_budget)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        from .solver import SolveResult

        return SolveResult(
            matching=matching,
            rewires=rewires,
            solver_millis=elapsed_ms,
            mcf_invocations=0,
            algo_name="oracle",
        )
    raise ValueError(f"unknown algorithm {algo!r}")


def _run_task(task):
    """One (grid entry, seed) unit of work; safe to run in a worker process."""
    entry, seed, algos, oracle_budget = task
    churn = entry["churn"]
    cfg = ChurnConfig(churn_fraction=churn, seed=seed)
    instance, meta = gen_instance(
        entry["m"], entry["n"], entry["r"], entry["a_prime"], entry["b_prime"], cfg
    )
    instance_id = f"m{entry['m']}-n{entry['n']}-churn{churn}-seed{seed}"
    total_links = int(instance.target_logical.sum())

    rows: list[BenchRecord] = []
    errors: list[str] = []
    for algo in algos:
        if algo == "oracle" and total_links > ORACLE_MAX_LINKS:
            errors.append(
                f"{instance_id},oracle,skipped: total links {total_links} > {ORACLE_MAX_LINKS}"
            )
            continue
        try:
            result = run_algo(instance, algo, oracle_budget)
        except (NotProportional, InfeasibleDecomposition, GreedyInfeasible, BudgetExceeded) as exc:
            errors.append(f"{instance_id},{algo},failed: {exc}")
            continue
        ok, why = is_feasible(result.matching, instance.phys, instance.target_logical)
        if not ok:
            errors.append(f"{instance_id},{algo},infeasible output: {why}")
            continue
        # Independent recount; never trust the solver's own figure blindly.
        rewires = rewire_count(instance.old_matching, result.matching)
        rows.append(
            BenchRecord(
                instance_id=instance_id,
                algo=algo,
                m=entry["m"],
                n=entry["n"],
                total_links=total_links,
                rewires=rewires,
                rewire_ratio=(rewires / total_links) if total_links else 0.0,
                solve_ms=result.solver_millis,
                mcf_invocations=result.mcf_invocations,
                feasible=True,
            )
        )
    return rows, errors


def run_bench(
    config: dict,
    out: TextIO,
    err: TextIO,
    jobs: int = 1,
) -> list[BenchRecord]:
    """Run the whole benchmark grid and stream CSV to `out`.

    Parallelism (jobs > 1) is across instances only; per-solve timings stay
    single-threaded. Output order is deterministic regardless of jobs."""
    grid = config["grid"]
    seeds = config["seeds"]
    algos = config["algos"]
    oracle_budget = config.get("oracle_budget", 5_000_000)

    tasks = [
        (entry, seed, algos, oracle_budget) for entry in grid for seed in seeds
    ]

    out.write(CSV_HEADER + "\n")
    all_rows: list[BenchRecord] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]

    for rows, errors in results:
        for row in rows:
            out.write(row.to_csv_row() + "\n")
            all_rows.append(row)
        for line in errors:
            err.write(line + "\n")

    _write_summary(all_rows, out)
    return all_rows


def _write_summary(rows: list[BenchRecord], out: TextIO) -> None:
    out.write("# summary (synthetic churn workloads; not trace-driven)\n")
    for algo in sorted({r.algo for r in rows}):
        sub = [r for r in rows if r.algo == algo]
        # Geometric mean needs positive samples; clamp at 1 microsecond.
        gm = math.exp(
            sum(math.log(max(r.solve_ms, 1e-3)) for r in sub) / len(sub)
        )
        mean_ratio = sum(r.rewire_ratio for r in sub) / len(sub)
        out.write(
            f"# algo={algo} runs={len(sub)} geomean_solve_ms={gm:.3f} mean_rewire_ratio={mean_ratio:.6f}\n"
        )
