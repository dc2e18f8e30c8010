"""Recursive bipartition solver: exact two-group solve via min-cost flow,
then recursive decomposition for an arbitrary number of OCSes.

Correctness is guaranteed on proportional physical topologies; strict mode
(the default) rejects anything else up front.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .flow import Arc, FlowNetwork, Infeasible, expand_to_arcs, piecewise_rewire_cost, solve_min_cost_flow
from .model import (
    Instance,
    PhysicalTopology,
    aggregate_group,
    detect_proportional,
    rewire_count,
)


class NotProportional(Exception):
    """Strict mode: the physical topology has no proportionality witness."""


class InfeasibleDecomposition(Exception):
    """A sub-problem had no feasible flow (non-proportional or corrupt input)."""

    def __init__(self, group: Sequence[int], message: str = ""):
        self.group = list(group)
        super().__init__(f"no feasible flow for OCS group {self.group}" + (f": {message}" if message else ""))


class InternalInvariantError(AssertionError):
    """A solver-internal invariant failed; indicates a bug, not bad input."""


def bipartition(group: Sequence[int]) -> tuple[list[int], list[int]]:
    """Even split by cardinality in ascending index order; larger half first."""
    if len(group) < 2:
        raise ValueError("need at least two OCSes to bipartition")
    ordered = sorted(group)
    half = (len(ordered) + 1) // 2
    return ordered[:half], ordered[half:]


@dataclass
class SolveOptions:
    strict_proportional: bool = True
    split_rule: Callable[[Sequence[int]], tuple[list[int], list[int]]] = bipartition


@dataclass
class SolveResult:
    matching: np.ndarray  # (n, m, m)
    rewires: int
    solver_millis: float
    mcf_invocations: int
    algo_name: str


def solve_two_groups(
    phys: PhysicalTopology,
    u: np.ndarray,
    c_target: np.ndarray,
    group1: Sequence[int],
    group2: Sequence[int],
) -> tuple[np.ndarray, np.ndarray, int]:
    """Split a target logical topology between two imaginary OCSes.

    Group 1 becomes the supply/demand side of the flow network; group 2 is
    implied by substitution (its share of each cell is c_target - c1).
    Returns (c1, c2, merged_cost) where merged_cost sums the per-cell
    piecewise rewire cost at the chosen split.
    """
    m = phys.m
    a1, b1, u1 = aggregate_group(phys, u, group1)
    _, _, u2 = aggregate_group(phys, u, group2)

    arcs = []
    costs = {}
    for i in range(m):
        for j in range(m):
            c = int(c_target[i][j])
            plc = piecewise_rewire_cost(int(u1[i][j]), int(u2[i][j]), c)
            costs[(i, j)] = plc
            for capacity, unit_cost in expand_to_arcs(plc):
                arcs.append(Arc(i, j, capacity, unit_cost, (i, j)))

    net = FlowNetwork(supplies=b1, demands=a1, arcs=arcs)
    try:
        result = solve_min_cost_flow(net)
    except Infeasible as exc:
        raise InfeasibleDecomposition(list(group1) + list(group2), str(exc)) from exc

    c1 = result.cell_flow[:m, :m]
    c2 = np.asarray(c_target, dtype=np.int64) - c1
    merged_cost = sum(
        costs[(i, j)].value(int(c1[i][j])) for i in range(m) for j in range(m)
    )
    return c1, c2, merged_cost


def solve(instance: Instance, options: SolveOptions | None = None) -> SolveResult:
    """Compute a new matching minimizing rewires via recursive bipartition.

    Exact for n <= 2; for larger n each merge step is an approximation, so
    the reported rewire count is always recomputed from the assembled
    matching against the original per-OCS old matching.
    """
    opts = options or SolveOptions()
    phys = instance.phys
    if opts.strict_proportional and detect_proportional(phys) is None:
        raise NotProportional("physical topology is not proportional")

    m, n = phys.m, phys.n
    u = instance.old_matching
    x = np.zeros((n, m, m), dtype=np.int64)
    mcf_calls = 0

    def solve_rec(group: list[int], c_group: np.ndarray) -> None:
        nonlocal mcf_calls
        if len(group) == 1:
            k = group[0]
            if (c_group.sum(axis=0) != phys.a[:, k]).any() or (
                c_group.sum(axis=1) != phys.b[:, k]
            ).any():
                raise InternalInvariantError(
                    f"leaf marginals for OCS {k} do not match its physical columns"
                )
            x[k] = c_group
            return
        g1, g2 = opts.split_rule(group)
        c1, c2, _ = solve_two_groups(phys, u, c_group, g1, g2)
        mcf_calls += 1
        solve_rec(g1, c1)
        solve_rec(g2, c2)

    start = time.perf_counter()
    solve_rec(list(range(n)), np.asarray(instance.target_logical, dtype=np.int64))
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    return SolveResult(
        matching=x,
        rewires=rewire_count(u, x),
        solver_millis=elapsed_ms,
        mcf_invocations=mcf_calls,
        algo_name="bimcf",
    )
