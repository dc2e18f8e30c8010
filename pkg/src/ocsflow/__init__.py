"""Minimal-rewiring topology solver toolkit for hybrid optical-electrical DCNs."""

from .model import (
    Instance,
    PhysicalTopology,
    ProportionalSpec,
    ZeroRowError,
    aggregate_group,
    detect_proportional,
    is_feasible,
    logical_of,
    rewire_count,
    validate_instance,
    validate_physical,
)
from .flow import (
    Arc,
    FlowNetwork,
    FlowResult,
    Infeasible,
    PiecewiseLinearCost,
    expand_to_arcs,
    piecewise_rewire_cost,
    solve_min_cost_flow,
    verify_flow,
)
from .solver import (
    InfeasibleDecomposition,
    NotProportional,
    SolveOptions,
    SolveResult,
    bipartition,
    solve,
    solve_two_groups,
)
from .baselines import (
    BudgetExceeded,
    GreedyInfeasible,
    InfeasibleInstance,
    greedy_solve,
    oracle_min_rewires,
)
from .workload import (
    ChurnConfig,
    UnbalancedSpec,
    gen_instance,
    gen_proportional_physical,
    perturb_matching,
    sample_matching,
)

__all__ = [name for name in dir() if not name.startswith("_")]
