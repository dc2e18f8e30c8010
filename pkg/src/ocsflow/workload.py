"""Synthetic workload generation: proportional physical topologies, random
feasible matchings, and churn-perturbed reconfiguration instances.

Randomness comes from `random.Random` (Mersenne Twister); the algorithm
identifier recorded in instance metadata is "python-random-mt19937" so that
instances regenerate identically for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Instance, Matching, PhysicalTopology, logical_of, rewire_count

RNG_ID = "python-random-mt19937"


class UnbalancedSpec(ValueError):
    """Per-switch degree vectors do not balance (sum a' != sum b')."""


@dataclass(frozen=True)
class ChurnConfig:
    churn_fraction: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.churn_fraction <= 1.0:
            raise ValueError(f"churn fraction {self.churn_fraction} outside [0, 1]")


def gen_proportional_physical(
    m: int,
    n: int,
    r: Sequence[int],
    a_prime: Sequence[int],
    b_prime: Sequence[int],
) -> PhysicalTopology:
    """Build a[j][k] = r[k]*a_prime[j], b[i][k] = r[k]*b_prime[i]."""
    r = np.asarray(r, dtype=np.int64)
    ap = np.asarray(a_prime, dtype=np.int64)
    bp = np.asarray(b_prime, dtype=np.int64)
    if len(r) != n or len(ap) != m or len(bp) != m:
        raise ValueError("r, a_prime, b_prime lengths must match n, m, m")
    if (r <= 0).any() or (ap <= 0).any() or (bp <= 0).any():
        raise ValueError("r, a_prime, b_prime entries must be positive")
    if ap.sum() != bp.sum():
        raise UnbalancedSpec(f"sum(a_prime)={ap.sum()} != sum(b_prime)={bp.sum()}")
    return PhysicalTopology(a=np.outer(ap, r), b=np.outer(bp, r))


def sample_matching(phys: PhysicalTopology, seed: int) -> Matching:
    """Uniform-ish random member of S(a, b, .) by per-OCS stub pairing."""
    rng = random.Random(seed)
    m, n = phys.m, phys.n
    x = np.zeros((n, m, m), dtype=np.int64)
    for k in range(n):
        inputs = [i for i in range(m) for _ in range(int(phys.b[i][k]))]
        outputs = [j for j in range(m) for _ in range(int(phys.a[j][k]))]
        if len(inputs) != len(outputs):
            raise ValueError(f"OCS {k} is unbalanced; run validate_physical first")
        rng.shuffle(outputs)
        for i, j in zip(inputs, outputs):
            x[k][i][j] += 1
    return x


def perturb_matching(u: Matching, cfg: ChurnConfig) -> Matching:
    """Re-home a churn fraction of each OCS's links among themselves.

    Per-OCS marginals are untouched, so the result stays feasible for the
    same physical topology (with its own induced logical topology).
    """
    u = np.asarray(u, dtype=np.int64)
    if cfg.churn_fraction == 0.0:
        return u.copy()
    rng = random.Random(cfg.seed)
    n, m, _ = u.shape
    x = np.zeros((n, m, m), dtype=np.int64)
    for k in range(n):
        pairs = [
            (i, j)
            for i in range(m)
            for j in range(m)
            for _ in range(int(u[k][i][j]))
        ]
        n_churn = int(cfg.churn_fraction * len(pairs))
        picked = sorted(rng.sample(range(len(pairs)), n_churn)) if n_churn else []
        detached = [pairs[p][1] for p in picked]
        rng.shuffle(detached)
        for pos, out in zip(picked, detached):
            pairs[pos] = (pairs[pos][0], out)
        for i, j in pairs:
            x[k][i][j] += 1
    return x


def gen_instance(
    m: int,
    n: int,
    r: Sequence[int],
    a_prime: Sequence[int],
    b_prime: Sequence[int],
    cfg: ChurnConfig,
) -> tuple[Instance, dict]:
    """Generate a solvable reconfiguration instance plus its metadata record.

    The target logical topology comes from an actual perturbed matching
    (the witness), so a feasible solution always exists and the witness
    rewire count upper-bounds the optimum.
    """
    phys = gen_proportional_physical(m, n, r, a_prime, b_prime)
    u = sample_matching(phys, cfg.seed)
    witness = perturb_matching(u, cfg)
    instance = Instance(
        phys=phys, old_matching=u, target_logical=logical_of(witness)
    )
    metadata = {
        "seed": cfg.seed,
        "churn": cfg.churn_fraction,
        "r": [int(v) for v in r],
        "a_prime": [int(v) for v in a_prime],
        "b_prime": [int(v) for v in b_prime],
        "witness_rewires": rewire_count(u, witness),
        "rng": RNG_ID,
    }
    return instance, metadata
