"""Combinatorial assignment of W-partitions and share matrices to edge nodes.

Both assignments come from one cyclic generator pi of order e: the partition
index matrix stacks pi^0 .. pi^(p-1), the share index matrix stacks
pi^(t(e-p)) for t = 0 .. beta with beta = ceil(e/p) - 1, filtered to [n].
Columns short of a = ceil(ceil(e/p) * n / e) entries are padded with further
powers of pi. Every plan is checked for the recovery-coverage property (each
share matrix meets every partition across the nodes holding it) before it is
returned; plans failing the check are rejected as infeasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple


class AssignmentError(ValueError):
    """Raised for infeasible or invalid assignment parameters."""


@dataclass(frozen=True)
class CyclicGenerator:
    """A permutation of [e] forming a single e-cycle; perm[i] is the image of i."""

    perm: Tuple[int, ...]

    def __post_init__(self):
        e = len(self.perm)
        if sorted(self.perm) != list(range(e)):
            raise AssignmentError("not a permutation of [e]")
        # Single cycle: starting from 0 must visit all e elements.
        seen = 0
        j = 0
        for _ in range(e):
            j = self.perm[j]
            seen += 1
            if j == 0:
                break
        if seen != e:
            raise AssignmentError("permutation is not a single e-cycle")

    @classmethod
    def from_cycle(cls, cycle: Sequence[int]) -> "CyclicGenerator":
        """Build from cycle notation, e.g. (0 3 1 4 2) maps 0->3, 3->1, ..."""
        e = len(cycle)
        perm = [0] * e
        for i, v in enumerate(cycle):
            perm[v] = cycle[(i + 1) % e]
        return cls(tuple(perm))

    @property
    def order(self) -> int:
        return len(self.perm)

    def power_row(self, t: int) -> Tuple[int, ...]:
        """The permutation pi^t as a row (pi^t(0), ..., pi^t(e-1))."""
        e = len(self.perm)
        row = list(range(e))
        for _ in range(t % e):
            row = [self.perm[x] for x in row]
        return tuple(row)


def default_generator(e: int) -> CyclicGenerator:
    """pi = (0 e-1 e-2 ... 1), i.e. j -> j - 1 mod e."""
    if e < 1:
        raise AssignmentError("need e >= 1")
    return CyclicGenerator(tuple((j - 1) % e for j in range(e)))


def shares_per_node(e: int, p: int, n: int) -> int:
    """a = ceil(ceil(e/p) * n / e)."""
    return math.ceil(math.ceil(e / p) * n / e)


def build_iw(e: int, p: int, pi: CyclicGenerator) -> List[Tuple[int, ...]]:
    """The p x e partition index matrix; row t is pi^t, column j is node j's order."""
    if not 1 <= p <= e:
        raise AssignmentError(f"need 1 <= p <= e, got p={p}, e={e}")
    if pi.order != e:
        raise AssignmentError("generator order does not match e")
    rows = []
    row = tuple(range(e))
    for _ in range(p):
        rows.append(row)
        row = tuple(pi.perm[x] for x in row)
    return rows


def build_is(
    e: int, p: int, n: int, pi: CyclicGenerator
) -> Tuple[List[Tuple[int, ...]], bool]:
    """Per-node ordered share index lists (exactly a each) and a padding flag.

    Starts from the rows pi^(t(e-p)), t = 0..beta, filters each column to [n]
    with duplicates dropped, then appends rows pi^(beta(e-p)+1), ... until
    every column holds a distinct indices.
    """
    if not 1 <= n <= e:
        raise AssignmentError(f"need 1 <= n <= e, got n={n}, e={e}")
    if not 1 <= p <= e:
        raise AssignmentError(f"need 1 <= p <= e, got p={p}, e={e}")
    beta = math.ceil(e / p) - 1
    a = shares_per_node(e, p, n)
    cols: List[List[int]] = [[] for _ in range(e)]

    def absorb(row):
        for j in range(e):
            v = row[j]
            if v < n and v not in cols[j] and len(cols[j]) < a:
                cols[j].append(v)

    for t in range(beta + 1):
        absorb(pi.power_row(t * (e - p)))
    padded = any(len(c) < a for c in cols)
    exp = beta * (e - p)
    for _ in range(e):  # e consecutive powers cover every residue
        if all(len(c) == a for c in cols):
            break
        exp += 1
        absorb(pi.power_row(exp))
    if any(len(c) != a for c in cols):
        raise AssignmentError("infeasible assignment: cannot fill share columns")
    return [tuple(c) for c in cols], padded


@dataclass(frozen=True)
class AssignmentPlan:
    """A validated joint assignment of partitions and shares to e nodes.

    iw_cols[j][l] is the l-th partition node j processes (phi_j^w); is_cols[j][h]
    is the h-th share matrix node j receives (phi_j^s). Construct via build_plan,
    which enforces feasibility and coverage.
    """

    e: int
    n: int
    k: int
    p: int
    a: int
    beta: int
    z: int
    pi: CyclicGenerator
    iw: Tuple[Tuple[int, ...], ...]          # p x e
    iw_cols: Tuple[Tuple[int, ...], ...]     # e columns of p partition indices
    is_cols: Tuple[Tuple[int, ...], ...]     # e columns of a share indices
    padded: bool


def verify_coverage(plan: AssignmentPlan) -> Tuple[bool, Optional[Tuple[int, set]]]:
    """True iff every share index meets all e partitions across its holders.

    On failure returns the witness (share index, set of missing partitions).
    """
    all_parts = set(range(plan.e))
    for h in range(plan.n):
        covered = set()
        for j in range(plan.e):
            if h in plan.is_cols[j]:
                covered.update(plan.iw_cols[j])
        if covered != all_parts:
            return False, (h, all_parts - covered)
    return True, None


def build_plan(
    e: int, n: int, p: int, z: int, pi: Optional[CyclicGenerator] = None
) -> AssignmentPlan:
    """Assemble and validate a full assignment plan with threshold k = a*z + 1."""
    if e < 1 or n < 1 or p < 1 or z < 0:
        raise AssignmentError("e, n, p must be positive and z nonnegative")
    if pi is None:
        pi = default_generator(e)
    if pi.order != e:
        raise AssignmentError("generator order does not match e")
    a = shares_per_node(e, p, n)
    beta = math.ceil(e / p) - 1
    k = a * z + 1
    if not k <= n <= e:
        raise AssignmentError(
            f"infeasible (k <= n <= e violated): k={k}, n={n}, e={e}"
        )
    iw = build_iw(e, p, pi)
    iw_cols = tuple(tuple(iw[t][j] for t in range(p)) for j in range(e))
    is_cols, padded = build_is(e, p, n, pi)
    plan = AssignmentPlan(
        e=e, n=n, k=k, p=p, a=a, beta=beta, z=z, pi=pi,
        iw=tuple(iw), iw_cols=iw_cols, is_cols=tuple(is_cols), padded=padded,
    )
    ok, witness = verify_coverage(plan)
    if not ok:
        raise AssignmentError(f"coverage violated: witness {witness}")
    return plan


def format_matrix(rows: Sequence[Sequence[int]]) -> str:
    return "\n".join("  " + " ".join(f"{v:2d}" for v in row) for row in rows)


def format_plan(plan: AssignmentPlan) -> str:
    """Human-readable dump of the index matrices and per-node sets."""
    a = plan.a
    is_rows = [
        tuple(plan.is_cols[j][t] for j in range(plan.e)) for t in range(a)
    ]
    lines = [
        f"plan: e={plan.e} n={plan.n} p={plan.p} z={plan.z} "
        f"k={plan.k} a={plan.a} beta={plan.beta} padded={plan.padded}",
        "I_w (partition assignment, columns are nodes):",
        format_matrix(plan.iw),
        "I_s (share assignment, columns are nodes):",
        format_matrix(is_rows),
    ]
    for j in range(plan.e):
        lines.append(
            f"node {j}: partitions {list(plan.iw_cols[j])} "
            f"shares {list(plan.is_cols[j])}"
        )
    return "\n".join(lines)
