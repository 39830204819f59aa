"""Timing-free end-to-end execution of the private inference scheme.

Ground truth for correctness and privacy: generate shares, compute every
intermediate result W_l . S^(h) a node is assigned, decode per partition,
and compare against the direct products. The latency simulator abstracts
exactly this pipeline.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .assignment import AssignmentPlan
from .field import PrimeField
from .sss import (
    RandomnessTape,
    SharingError,
    SssParams,
    decode_computation,
    make_share_matrices,
    secret_value_table,
)


class ProtocolError(ValueError):
    """Raised on inconsistent protocol inputs or internal recovery failures."""


@dataclass(frozen=True)
class PublicMatrix:
    """The public m x r matrix W, partitioned into e row blocks on demand."""

    field: PrimeField
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def r(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]]) -> "PublicMatrix":
        if not rows:
            raise ProtocolError("W must be nonempty")
        r = len(rows[0])
        if any(len(row) != r for row in rows):
            raise ProtocolError("W rows have inconsistent length")
        return cls(field, tuple(tuple(v % field.q for v in row) for row in rows))

    def partitions(self, e: int) -> List[Tuple[Tuple[int, ...], ...]]:
        """Split into e row blocks; the first m mod e blocks get the extra row."""
        if e < 1 or e > self.m:
            raise ProtocolError(f"need 1 <= e <= m, got e={e}, m={self.m}")
        base, extra = divmod(self.m, e)
        blocks = []
        start = 0
        for l in range(e):
            size = base + (1 if l < extra else 0)
            blocks.append(self.entries[start:start + size])
            start += size
        return blocks


def _matmul_mod(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], q: int) -> Tuple[Tuple[int, ...], ...]:
    cols = len(B[0])
    inner = len(B)
    out = []
    for row in A:
        out.append(
            tuple(
                sum(row[t] * B[t][c] for t in range(inner)) % q
                for c in range(cols)
            )
        )
    return tuple(out)


def make_tape(seed: int, u: int, r: int, k: int, q: int) -> RandomnessTape:
    """Counter-based tape: symbol (i, l, kappa) is a pure function of the seed.

    Replayable and independent of iteration order; the 2^64 -> [0, q) reduction
    bias is negligible for the moduli used here.
    """
    def symbol(i, l, kappa):
        digest = hashlib.sha256(f"{seed}:{i}:{l}:{kappa}".encode()).digest()
        return int.from_bytes(digest[:8], "big") % q

    return RandomnessTape(
        tuple(
            tuple(tuple(symbol(i, l, kap) for kap in range(1, k)) for l in range(r))
            for i in range(u)
        )
    )


def run_functional(
    data: Sequence[Sequence[int]],
    W: PublicMatrix,
    plan: AssignmentPlan,
    seed: int = 0,
) -> Tuple[List[Tuple[int, ...]], Dict[Tuple[int, int], Tuple[Tuple[int, ...], ...]]]:
    """Execute sharing, node products, and decoding; return W.x_i per user + IR set.

    The decoded results are exact: each partition is recovered from the k
    lowest-indexed shares available for it.
    """
    field = W.field
    params = SssParams(field, plan.n, plan.k)
    u = len(data)
    r = W.r
    if any(len(x) != r for x in data):
        raise ProtocolError("user data length does not match r")
    tape = make_tape(seed, u, r, plan.k, field.q)
    shares = make_share_matrices([[v % field.q for v in x] for x in data], params, tape)
    parts = W.partitions(plan.e)

    irs: Dict[Tuple[int, int], Tuple[Tuple[int, ...], ...]] = {}
    for j in range(plan.e):
        for h in plan.is_cols[j]:
            for l in plan.iw_cols[j]:
                if (l, h) not in irs:
                    irs[(l, h)] = _matmul_mod(parts[l], shares[h].entries, field.q)

    blocks = []
    for l in range(plan.e):
        hs = sorted(h for (ll, h) in irs if ll == l)
        if len(hs) < plan.k:
            raise ProtocolError(
                f"recovery condition unmet: partition {l} has {len(hs)} < k shares"
            )
        chosen = {h: irs[(l, h)] for h in hs[: plan.k]}
        blocks.append(decode_computation(chosen, params))

    results = []
    for i in range(u):
        vec = []
        for block in blocks:
            vec.extend(row[i] for row in block)
        results.append(tuple(vec))
    return results, irs


def eavesdropper_view(plan: AssignmentPlan, nodes: Set[int]) -> Set[int]:
    """Share indices exposed by observing exactly z nodes (or their links)."""
    if len(nodes) != plan.z:
        raise ProtocolError(f"need exactly z={plan.z} nodes, got {len(nodes)}")
    if any(not 0 <= j < plan.e for j in nodes):
        raise ProtocolError("node index out of range")
    view: Set[int] = set()
    for j in nodes:
        view.update(plan.is_cols[j])
    return view


@dataclass
class PrivacyReport:
    passed: bool
    subsets_checked: int
    failures: List[str]
    vacuous: bool = False

    def __str__(self) -> str:
        if self.vacuous:
            return "privacy audit: vacuous pass (z = 0)"
        status = "pass" if self.passed else "FAIL"
        msg = f"privacy audit: {status} ({self.subsets_checked} node subsets)"
        if self.failures:
            msg += "\n" + "\n".join("  " + f for f in self.failures)
        return msg


def privacy_audit(plan: AssignmentPlan, field: PrimeField) -> PrivacyReport:
    """Exhaustively verify zero leakage for every z-subset of nodes.

    Enumeration scale (scalar secrets, tiny q): for each subset, the joint
    (observed values -> secret -> count) table must be exactly uniform in the
    secret for every observable value vector.
    """
    if plan.z == 0:
        return PrivacyReport(passed=True, subsets_checked=0, failures=[], vacuous=True)
    params = SssParams(field, plan.n, plan.k)
    failures = []
    count = 0
    for nodes in itertools.combinations(range(plan.e), plan.z):
        count += 1
        view = sorted(eavesdropper_view(plan, set(nodes)))
        if len(view) >= plan.k:
            failures.append(
                f"nodes {nodes} observe {len(view)} >= k={plan.k} distinct shares"
            )
            continue
        points = [params.eval_points[h] for h in view]
        try:
            table = secret_value_table(points, params)
        except SharingError as exc:
            failures.append(f"nodes {nodes}: {exc}")
            continue
        for values, row in table.items():
            counts = set(row.values())
            if len(counts) != 1:
                failures.append(
                    f"nodes {nodes}, observed {values}: non-uniform histogram"
                )
                break
    return PrivacyReport(passed=not failures, subsets_checked=count, failures=failures)
