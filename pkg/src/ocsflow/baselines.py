"""Baseline algorithms: per-OCS greedy min-cost-flow and an exhaustive
branch-and-bound oracle for small instances."""

from __future__ import annotations

import time
from typing import Sequence

import numpy as np

from .flow import Arc, FlowNetwork, Infeasible, expand_to_arcs, piecewise_rewire_cost, solve_min_cost_flow
from .model import Instance, rewire_count
from .solver import SolveResult


class GreedyInfeasible(Exception):
    """The remainder could not absorb some OCS's links at the given step."""

    def __init__(self, k: int, message: str = ""):
        self.k = k
        super().__init__(f"greedy step infeasible at OCS {k}" + (f": {message}" if message else ""))


class BudgetExceeded(Exception):
    """Search-node limit hit before the oracle could certify an optimum."""


class InfeasibleInstance(Exception):
    """The feasible-matching set is empty (corrupt or inconsistent input)."""


def greedy_solve(instance: Instance, ocs_order: Sequence[int] | None = None) -> SolveResult:
    """Assign OCSes one at a time, each keeping as many of its own old links
    as possible; no lookahead across OCSes."""
    phys = instance.phys
    m, n = phys.m, phys.n
    order = list(ocs_order) if ocs_order is not None else list(range(n))
    if sorted(order) != list(range(n)):
        raise ValueError(f"ocs_order must be a permutation of 0..{n - 1}")

    u = instance.old_matching
    c_rem = np.asarray(instance.target_logical, dtype=np.int64).copy()
    x = np.zeros((n, m, m), dtype=np.int64)
    mcf_calls = 0

    start = time.perf_counter()
    for k in order:
        arcs = []
        for i in range(m):
            for j in range(m):
                plc = piecewise_rewire_cost(int(u[k][i][j]), 0, int(c_rem[i][j]))
                for capacity, unit_cost in expand_to_arcs(plc):
                    arcs.append(Arc(i, j, capacity, unit_cost, (i, j)))
        net = FlowNetwork(supplies=phys.b[:, k], demands=phys.a[:, k], arcs=arcs)
        try:
            result = solve_min_cost_flow(net)
        except Infeasible as exc:
            raise GreedyInfeasible(k, str(exc)) from exc
        mcf_calls += 1
        x[k] = result.cell_flow[:m, :m]
        c_rem -= x[k]
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    return SolveResult(
        matching=x,
        rewires=rewire_count(u, x),
        solver_millis=elapsed_ms,
        mcf_invocations=mcf_calls,
        algo_name="greedy",
    )


def oracle_min_rewires(
    instance: Instance,
    node_budget: int = 5_000_000,
    col_major: bool = False,
) -> tuple[np.ndarray, int]:
    """Certified global minimum by exhaustive depth-first enumeration.

    Enumerates every feasible matching OCS by OCS, assigning per-OCS
    transportation matrices cell by cell with marginal pruning and a
    running-rewire-count bound. Intended for tiny instances (total logical
    links <= 16 or so). `col_major` flips the cell visit order; certified
    results must not depend on it.
    """
    phys = instance.phys
    m, n = phys.m, phys.n
    u = instance.old_matching
    c_rem = np.asarray(instance.target_logical, dtype=np.int64).copy()

    cells = [(i, j) for i in range(m) for j in range(m)]
    if col_major:
        cells = [(i, j) for j in range(m) for i in range(m)]

    best_cost = None
    best_x = None
    x = np.zeros((n, m, m), dtype=np.int64)
    nodes = 0

    def assign_ocs(k: int, cost_so_far: int) -> None:
        nonlocal best_cost, best_x, nodes
        if k == n - 1:
            # The last OCS is forced: it must absorb the whole remainder.
            if (c_rem.sum(axis=0) != phys.a[:, k]).any():
                return
            if (c_rem.sum(axis=1) != phys.b[:, k]).any():
                return
            total = cost_so_far + int(np.maximum(u[k] - c_rem, 0).sum())
            if best_cost is None or total < best_cost:
                x[k] = c_rem
                best_cost = total
                best_x = x.copy()
            return
        row_rem = phys.b[:, k].copy()
        col_rem = phys.a[:, k].copy()
        mat = np.zeros((m, m), dtype=np.int64)

        def fill(idx: int, cost: int) -> None:
            nonlocal nodes
            if best_cost is not None and cost >= best_cost:
                return
            if idx == len(cells):
                if row_rem.any() or col_rem.any():
                    return
                x[k] = mat
                c_rem_backup = mat.copy()
                c_rem[...] -= mat
                assign_ocs(k + 1, cost)
                c_rem[...] += c_rem_backup
                return
            i, j = cells[idx]
            hi = min(int(row_rem[i]), int(col_rem[j]), int(c_rem[i][j]))
            for v in range(hi + 1):
                nodes += 1
                if nodes > node_budget:
                    raise BudgetExceeded(f"search exceeded {node_budget} nodes")
                mat[i][j] = v
                row_rem[i] -= v
                col_rem[j] -= v
                fill(idx + 1, cost + max(int(u[k][i][j]) - v, 0))
                row_rem[i] += v
                col_rem[j] += v
            mat[i][j] = 0

        fill(0, cost_so_far)

    assign_ocs(0, 0)
    if best_cost is None:
        raise InfeasibleInstance("no feasible matching exists")
    return best_x, int(best_cost)
