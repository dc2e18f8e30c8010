"""Core domain model: topologies, matchings, feasibility, rewire counting.

All arithmetic is exact integer arithmetic (numpy int64 / Python ints);
no floating point is used anywhere in this module.

Conventions:
  a[j][k] = number of links from OCS k down to switch j   (shape m x n)
  b[i][k] = number of links from switch i up to OCS k     (shape m x n)
  c[i][j] = equivalent switch-to-switch links             (shape m x m)
  x[k][i][j] = links from switch i to switch j forwarded through OCS k
               (OCS-major storage, shape n x m x m)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# A matching is an (n, m, m) int array; a logical topology an (m, m) int array.
Matching = np.ndarray
LogicalTopology = np.ndarray


class ZeroRowError(ValueError):
    """A switch has zero total uplinks or downlinks; proportionality is undefined."""


class InstanceFormatError(ValueError):
    """The JSON instance document violates the wire format."""


def _int_array(data, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.asarray(data)
    if arr.shape != shape:
        raise InstanceFormatError(f"{name}: expected shape {shape}, got {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InstanceFormatError(f"{name}: entries must be integers")
    return arr.astype(np.int64)


@dataclass(frozen=True)
class PhysicalTopology:
    """Fixed cabling between m ToR switches and n OCSes."""

    a: np.ndarray  # (m, n), a[j][k]
    b: np.ndarray  # (m, n), b[i][k]

    def __post_init__(self):
        a = _int_array(self.a, np.asarray(self.a).shape, "a")
        if a.ndim != 2:
            raise InstanceFormatError("a must be a 2-D matrix")
        b = _int_array(self.b, a.shape, "b")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True)
class ProportionalSpec:
    """Witness of proportionality: a[j][k] = r[k]*a_prime[j], b[i][k] = r[k]*b_prime[i]."""

    r: tuple[int, ...]
    a_prime: tuple[int, ...]
    b_prime: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    """A reconfiguration problem: old matching u plus the new target logical topology."""

    phys: PhysicalTopology
    old_matching: Matching  # (n, m, m)
    target_logical: LogicalTopology  # (m, m)

    def __post_init__(self):
        m, n = self.phys.m, self.phys.n
        u = _int_array(self.old_matching, (n, m, m), "u")
        c = _int_array(self.target_logical, (m, m), "c_new")
        object.__setattr__(self, "old_matching", u)
        object.__setattr__(self, "target_logical", c)


def validate_physical(phys: PhysicalTopology) -> list[str]:
    """Return a list of invariant violations; empty means valid."""
    violations = []
    if phys.m < 1 or phys.n < 1:
        violations.append(f"dimensions must be positive, got m={phys.m}, n={phys.n}")
        return violations
    if (phys.a < 0).any():
        j, k = np.argwhere(phys.a < 0)[0]
        violations.append(f"a[{j}][{k}] is negative")
    if (phys.b < 0).any():
        i, k = np.argwhere(phys.b < 0)[0]
        violations.append(f"b[{i}][{k}] is negative")
    sa = phys.a.sum(axis=0)
    sb = phys.b.sum(axis=0)
    for k in range(phys.n):
        if sa[k] != sb[k]:
            violations.append(f"OCS {k}: sum(a)={sa[k]} != sum(b)={sb[k]}")
    return violations


def logical_of(x: Matching) -> LogicalTopology:
    """Logical topology induced by a matching: c[i][j] = sum_k x[k][i][j]."""
    return np.asarray(x, dtype=np.int64).sum(axis=0)


def validate_logical(c: LogicalTopology, phys: PhysicalTopology) -> list[str]:
    """Marginal-consistency check of a logical topology against a physical one."""
    violations = []
    if (c < 0).any():
        i, j = np.argwhere(c < 0)[0]
        violations.append(f"c[{i}][{j}] is negative")
    col = c.sum(axis=0)
    row = c.sum(axis=1)
    a_tot = phys.a.sum(axis=1)
    b_tot = phys.b.sum(axis=1)
    for j in range(phys.m):
        if col[j] != a_tot[j]:
            violations.append(
                f"switch {j}: column sum {col[j]} != total downlinks {a_tot[j]}"
            )
    for i in range(phys.m):
        if row[i] != b_tot[i]:
            violations.append(
                f"switch {i}: row sum {row[i]} != total uplinks {b_tot[i]}"
            )
    return violations


def is_feasible(
    x: Matching, phys: PhysicalTopology, c: LogicalTopology
) -> tuple[bool, str | None]:
    """Check membership in S(a, b, c): all three marginal constraint families."""
    x = np.asarray(x, dtype=np.int64)
    if (x < 0).any():
        k, i, j = np.argwhere(x < 0)[0]
        return False, f"x[{k}][{i}][{j}] is negative"
    # sum_i x[k][i][j] = a[j][k]
    per_ocs_col = x.sum(axis=1)  # (n, m) indexed [k][j]
    for k in range(phys.n):
        for j in range(phys.m):
            if per_ocs_col[k][j] != phys.a[j][k]:
                return False, (
                    f"OCS {k}, switch {j}: incoming {per_ocs_col[k][j]} != a {phys.a[j][k]}"
                )
    # sum_j x[k][i][j] = b[i][k]
    per_ocs_row = x.sum(axis=2)  # (n, m) indexed [k][i]
    for k in range(phys.n):
        for i in range(phys.m):
            if per_ocs_row[k][i] != phys.b[i][k]:
                return False, (
                    f"OCS {k}, switch {i}: outgoing {per_ocs_row[k][i]} != b {phys.b[i][k]}"
                )
    # sum_k x[k][i][j] = c[i][j]
    total = x.sum(axis=0)
    if (total != c).any():
        i, j = np.argwhere(total != c)[0]
        return False, f"cell ({i},{j}): total {total[i][j]} != target {c[i][j]}"
    return True, None


def rewire_count(u: Matching, x: Matching) -> int:
    """Number of old links torn down: sum over all cells of max(u - x, 0)."""
    u = np.asarray(u, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    return int(np.maximum(u - x, 0).sum())


def detect_proportional(phys: PhysicalTopology) -> ProportionalSpec | None:
    """Recover the canonical (r, a', b') witness, or None if not proportional.

    Canonical form: gcd over k of r[k] is 1.
    """
    if (phys.a.sum(axis=1) == 0).any():
        j = int(np.argwhere(phys.a.sum(axis=1) == 0)[0][0])
        raise ZeroRowError(f"switch {j} has zero total downlinks")
    if (phys.b.sum(axis=1) == 0).any():
        i = int(np.argwhere(phys.b.sum(axis=1) == 0)[0][0])
        raise ZeroRowError(f"switch {i} has zero total uplinks")

    col_sums = phys.a.sum(axis=0)
    if (col_sums == 0).any():
        return None  # an empty OCS column cannot have a positive r[k]
    g = math.gcd(*(int(s) for s in col_sums))
    r = col_sums // g
    # Per-switch degrees from column 0; must divide exactly.
    if (phys.a[:, 0] % r[0]).any() or (phys.b[:, 0] % r[0]).any():
        return None
    a_prime = phys.a[:, 0] // r[0]
    b_prime = phys.b[:, 0] // r[0]
    if (a_prime <= 0).any() or (b_prime <= 0).any():
        return None
    if (phys.a != np.outer(a_prime, r)).any():
        return None
    if (phys.b != np.outer(b_prime, r)).any():
        return None
    return ProportionalSpec(
        r=tuple(int(v) for v in r),
        a_prime=tuple(int(v) for v in a_prime),
        b_prime=tuple(int(v) for v in b_prime),
    )


def aggregate_group(
    phys: PhysicalTopology, u: Matching, group: Iterable[int]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Merge a set of OCSes into one imaginary OCS.

    Returns (merged a-column, merged b-column, merged old-matching matrix).
    """
    ks = sorted(set(group))
    if not ks:
        raise ValueError("group must be nonempty")
    if ks[0] < 0 or ks[-1] >= phys.n:
        raise ValueError(f"group out of range: {ks}")
    a_col = phys.a[:, ks].sum(axis=1)
    b_col = phys.b[:, ks].sum(axis=1)
    u = np.asarray(u, dtype=np.int64)
    u_merged = u[ks].sum(axis=0)
    return a_col, b_col, u_merged


def validate_instance(inst: Instance) -> list[str]:
    """Full validation: physical invariants, old-matching feasibility, target marginals."""
    violations = validate_physical(inst.phys)
    if violations:
        return violations
    ok, why = is_feasible(inst.old_matching, inst.phys, logical_of(inst.old_matching))
    if not ok:
        violations.append(f"old matching infeasible: {why}")
    violations.extend(
        f"target logical: {v}" for v in validate_logical(inst.target_logical, inst.phys)
    )
    return violations


# --- JSON wire format -------------------------------------------------------

_INSTANCE_FIELDS = ("m", "n", "a", "b", "u", "c_new")


def _check_int_entries(obj, name: str) -> None:
    if isinstance(obj, bool) or not isinstance(obj, (int, list)):
        raise InstanceFormatError(f"{name}: entries must be integers")
    if isinstance(obj, list):
        for item in obj:
            _check_int_entries(item, name)


def instance_from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    unknown = set(doc) - set(_INSTANCE_FIELDS)
    if unknown:
        raise InstanceFormatError(f"unknown fields: {sorted(unknown)}")
    missing = set(_INSTANCE_FIELDS) - set(doc)
    if missing:
        raise InstanceFormatError(f"missing fields: {sorted(missing)}")
    m, n = doc["m"], doc["n"]
    if isinstance(m, bool) or isinstance(n, bool) or not isinstance(m, int) or not isinstance(n, int):
        raise InstanceFormatError("m and n must be integers")
    if m < 1 or n < 1:
        raise InstanceFormatError(f"m and n must be positive, got m={m}, n={n}")
    for field in ("a", "b", "u", "c_new"):
        _check_int_entries(doc[field], field)
    a = _int_array(doc["a"], (m, n), "a")
    b = _int_array(doc["b"], (m, n), "b")
    u = _int_array(doc["u"], (n, m, m), "u")
    c_new = _int_array(doc["c_new"], (m, m), "c_new")
    return Instance(PhysicalTopology(a, b), u, c_new)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "m": inst.phys.m,
        "n": inst.phys.n,
        "a": inst.phys.a.tolist(),
        "b": inst.phys.b.tolist(),
        "u": inst.old_matching.tolist(),
        "c_new": inst.target_logical.tolist(),
    }


def dumps_canonical(doc: dict) -> str:
    """Byte-stable JSON serialization used for all on-disk artifacts."""
    return json.dumps(doc, separators=(",", ":"), sort_keys=False) + "\n"


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return instance_from_dict(doc)


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(instance_to_dict(inst)))
