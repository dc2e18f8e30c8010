import itertools

import numpy as np
import pytest

from ocsflow import FlowNetwork, Instance, PhysicalTopology


def unit_phys(m: int, n: int) -> PhysicalTopology:
    """Every switch has exactly one uplink and downlink per OCS."""
    ones = np.ones((m, n), dtype=np.int64)
    return PhysicalTopology(a=ones.copy(), b=ones.copy())


def identity_matching(m: int, n: int) -> np.ndarray:
    x = np.zeros((n, m, m), dtype=np.int64)
    for k in range(n):
        x[k] = np.eye(m, dtype=np.int64)
    return x


def enumerate_min_cost(net: FlowNetwork):
    """Exhaustive minimum over all integral feasible flows; independent of
    the production solver. Returns (min_cost, set of optimal cell-flow
    tuples) or (None, set()) when infeasible."""
    supplies = [int(v) for v in net.supplies]
    demands = [int(v) for v in net.demands]
    best = [None]
    optima = set()
    flows = [0] * len(net.arcs)

    def rec(idx, sup, dem, cost):
        if idx == len(net.arcs):
            if any(sup) or any(dem):
                return
            if best[0] is None or cost < best[0]:
                best[0] = cost
                optima.clear()
            if cost == best[0]:
                m = max(len(sup), len(dem))
                cell = [[0] * m for _ in range(m)]
                for arc, f in zip(net.arcs, flows):
                    cell[arc.cell[0]][arc.cell[1]] += f
                optima.add(tuple(tuple(row) for row in cell))
            return
        arc = net.arcs[idx]
        hi = min(arc.capacity, sup[arc.supply], dem[arc.demand])
        for v in range(hi + 1):
            flows[idx] = v
            sup[arc.supply] -= v
            dem[arc.demand] -= v
            rec(idx + 1, sup, dem, cost + v * arc.unit_cost)
            sup[arc.supply] += v
            dem[arc.demand] += v
        flows[idx] = 0

    rec(0, supplies, demands, 0)
    return best[0], optima
