"""Integral min-cost flow on bipartite supply/demand networks with parallel arcs.

Each arc connects one supply node to one demand node, so every unit of flow
crosses exactly one arc. This makes a uniform cost shift (to clear negative
costs) change the optimum by exactly shift * total_demand without changing
the argmin, which lets the solver run a nonnegative-cost shortest-path loop.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np


class Infeasible(Exception):
    """Supplies cannot be routed to demands within the arc capacities."""


@dataclass(frozen=True)
class PiecewiseLinearCost:
    """Convex piecewise-linear cost on the integer domain [0, domain_max].

    Segment p spans (breakpoints[p-1], breakpoints[p]) with slope slopes[p];
    the implicit outer breakpoints are 0 and domain_max.
    """

    domain_max: int
    breakpoints: tuple[int, ...]
    slopes: tuple[int, ...]
    value_at_zero: int

    def __post_init__(self):
        if self.domain_max == 0:
            if self.breakpoints or self.slopes:
                raise ValueError("degenerate domain [0, 0] admits no segments")
            return
        pts = (0,) + self.breakpoints + (self.domain_max,)
        if any(lo >= hi for lo, hi in zip(pts, pts[1:])):
            raise ValueError(f"breakpoints must be strictly inside (0, {self.domain_max})")
        if any(s1 >= s2 for s1, s2 in zip(self.slopes, self.slopes[1:])):
            raise ValueError("slopes must be strictly increasing (convexity)")
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one slope per segment")

    def value(self, v: int) -> int:
        """Evaluate the cost at integer point v in [0, domain_max]."""
        if not 0 <= v <= self.domain_max:
            raise ValueError(f"{v} outside [0, {self.domain_max}]")
        pts = (0,) + self.breakpoints + (self.domain_max,)
        total = self.value_at_zero
        for p, slope in enumerate(self.slopes):
            lo, hi = pts[p], pts[p + 1]
            total += slope * max(0, min(v, hi) - lo)
        return total


def piecewise_rewire_cost(u1: int, u2: int, c: int) -> PiecewiseLinearCost:
    """Rewire cost of one cell of the two-group problem, restricted to [0, c].

    The cost of sending v units through group 1 is
        max(u1 - v, 0) + max(u2 - c + v, 0),
    counting old links torn down in both groups. Hinges sit at v = u1 and
    v = c - u2; slopes are a contiguous run of (-1, 0, +1).
    """
    if u1 < 0 or u2 < 0 or c < 0:
        raise ValueError("u1, u2, c must be nonnegative")

    def f(v: int) -> int:
        return max(u1 - v, 0) + max(u2 - c + v, 0)

    candidates = sorted({u1, c - u2})
    breakpoints = tuple(p for p in candidates if 0 < p < c)
    pts = (0,) + breakpoints + (c,)
    slopes = tuple(
        (f(hi) - f(lo)) // (hi - lo) for lo, hi in zip(pts, pts[1:]) if hi > lo
    )
    return PiecewiseLinearCost(
        domain_max=c, breakpoints=breakpoints, slopes=slopes, value_at_zero=f(0)
    )


def expand_to_arcs(plc: PiecewiseLinearCost) -> list[tuple[int, int]]:
    """Decompose into parallel (capacity, unit_cost) arcs, cheapest first.

    Convexity guarantees slopes ascend, so a min-cost solver fills the arcs
    in exactly the greedy segment order and the decomposition is exact.
    """
    pts = (0,) + plc.breakpoints + (plc.domain_max,)
    return [
        (hi - lo, slope)
        for (lo, hi), slope in zip(zip(pts, pts[1:]), plc.slopes)
        if hi > lo
    ]


@dataclass(frozen=True)
class Arc:
    supply: int
    demand: int
    capacity: int
    unit_cost: int
    cell: tuple[int, int]


@dataclass
class FlowNetwork:
    """Bipartite supply/demand network; arcs normalized to deterministic order."""

    supplies: np.ndarray
    demands: np.ndarray
    arcs: list[Arc] = field(default_factory=list)

    def __post_init__(self):
        self.supplies = np.asarray(self.supplies, dtype=np.int64)
        self.demands = np.asarray(self.demands, dtype=np.int64)
        self.arcs = sorted(
            self.arcs, key=lambda a: (a.supply, a.demand, a.unit_cost)
        )


@dataclass
class FlowResult:
    arc_flows: list[int]  # aligned with FlowNetwork.arcs
    total_cost: int
    cell_flow: np.ndarray  # (m, m)


def solve_min_cost_flow(net: FlowNetwork) -> FlowResult:
    """Successive shortest paths with node potentials (Dijkstra inner loop).

    Deterministic for identical input: arcs are iterated in the network's
    normalized order and heap ties break on node index.
    """
    total_supply = int(net.supplies.sum())
    total_demand = int(net.demands.sum())
    if total_supply != total_demand:
        raise ValueError(
            f"total supply {total_supply} != total demand {total_demand}"
        )

    ns, nd = len(net.supplies), len(net.demands)
    src, dst = ns + nd, ns + nd + 1
    n_nodes = ns + nd + 2

    shift = max([0] + [-a.unit_cost for a in net.arcs])

    # Residual edge arrays; edge 2e and 2e+1 are a forward/backward pair.
    to: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n_nodes)]

    def add_edge(u: int, v: int, capacity: int, unit_cost: int) -> int:
        e = len(to)
        to.extend([v, u])
        cap.extend([capacity, 0])
        cost.extend([unit_cost, -unit_cost])
        adj[u].append(e)
        adj[v].append(e + 1)
        return e

    for i in range(ns):
        add_edge(src, i, int(net.supplies[i]), 0)
    arc_edges = [
        add_edge(a.supply, ns + a.demand, a.capacity, a.unit_cost + shift)
        for a in net.arcs
    ]
    for j in range(nd):
        add_edge(ns + j, dst, int(net.demands[j]), 0)

    INF = float("inf")
    potential = [0] * n_nodes
    routed = 0
    shifted_cost = 0

    while routed < total_demand:
        dist = [INF] * n_nodes
        prev_edge = [-1] * n_nodes
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for e in adj[u]:
                if cap[e] <= 0:
                    continue
                v = to[e]
                nd_ = d + cost[e] + potential[u] - potential[v]
                if nd_ < dist[v]:
                    dist[v] = nd_
                    prev_edge[v] = e
                    heapq.heappush(heap, (nd_, v))
        if dist[dst] == INF:
            raise Infeasible(
                f"only {routed} of {total_demand} units routable"
            )
        for v in range(n_nodes):
            if dist[v] < INF:
                potential[v] += dist[v]
        # Bottleneck along the shortest path.
        push = total_demand - routed
        v = dst
        while v != src:
            e = prev_edge[v]
            push = min(push, cap[e])
            v = to[e ^ 1]
        v = dst
        while v != src:
            e = prev_edge[v]
            cap[e] -= push
            cap[e ^ 1] += push
            shifted_cost += push * cost[e]
            v = to[e ^ 1]
        routed += push

    arc_flows = [cap[e ^ 1] for e in arc_edges]
    m = max(ns, nd)
    cell_flow = np.zeros((m, m), dtype=np.int64)
    for a, flow in zip(net.arcs, arc_flows):
        cell_flow[a.cell] += flow
    return FlowResult(
        arc_flows=arc_flows,
        total_cost=shifted_cost - shift * total_demand,
        cell_flow=cell_flow,
    )


def verify_flow(net: FlowNetwork, result: FlowResult) -> list[str]:
    """Independent conservation/capacity check; never calls the solver."""
    violations = []
    out_flow = np.zeros(len(net.supplies), dtype=np.int64)
    in_flow = np.zeros(len(net.demands), dtype=np.int64)
    for idx, (arc, flow) in enumerate(zip(net.arcs, result.arc_flows)):
        if not 0 <= flow <= arc.capacity:
            violations.append(
                f"arc {idx}: flow {flow} outside [0, {arc.capacity}]"
            )
        out_flow[arc.supply] += flow
        in_flow[arc.demand] += flow
    for i, (got, want) in enumerate(zip(out_flow, net.supplies)):
        if got != want:
            violations.append(f"supply {i}: shipped {got} != {want}")
    for j, (got, want) in enumerate(zip(in_flow, net.demands)):
        if got != want:
            violations.append(f"demand {j}: received {got} != {want}")
    return violations


def dump_network(net: FlowNetwork) -> str:
    """Plain-text arc list for offline inspection: one `s d cap cost` per line."""
    return "\n".join(
        f"{a.supply} {a.demand} {a.capacity} {a.unit_cost}" for a in net.arcs
    )
