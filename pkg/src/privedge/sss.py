"""Shamir (n, k) secret sharing built on Reed-Solomon evaluation encoding.

Shares live at the evaluation points alpha_h = h + 1 (the secret sits at 0),
so any k shares reconstruct via Lagrange interpolation and any k - 1 reveal
nothing. Matrices of shares collect the (h+1)-th share of all users column
by column. All share values are canonical residues (plain ints).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Mapping, Sequence, Tuple

from .field import FieldError, PrimeField


class SharingError(ValueError):
    """Raised on dimension mismatches or insufficient shares."""


@dataclass(frozen=True)
class SssParams:
    """Parameters of an (n, k) sharing instance over a prime field."""

    field: PrimeField
    n: int
    k: int
    eval_points: Tuple[int, ...] = ()

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise SharingError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.n >= self.field.q:
            raise SharingError(f"need n < q, got n={self.n}, q={self.field.q}")
        if not self.eval_points:
            object.__setattr__(self, "eval_points", tuple(range(1, self.n + 1)))
        pts = self.eval_points
        if len(pts) != self.n:
            raise SharingError("need exactly n evaluation points")
        if len(set(pts)) != self.n or any(p % self.field.q == 0 for p in pts):
            raise SharingError("evaluation points must be distinct and nonzero")


@dataclass(frozen=True)
class ShareMatrix:
    """The (h+1)-th share of all users: an r x u matrix, users as columns."""

    h: int
    entries: Tuple[Tuple[int, ...], ...]  # entries[l][i] = share of entry l of user i

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def u(self) -> int:
        return len(self.entries[0]) if self.entries else 0


@dataclass(frozen=True)
class RandomnessTape:
    """Per (user, entry): the k - 1 uniform masking symbols used in sharing."""

    entries: Tuple[Tuple[Tuple[int, ...], ...], ...]  # [user][entry][kappa]

    @classmethod
    def from_lists(cls, entries) -> "RandomnessTape":
        return cls(tuple(tuple(tuple(row) for row in user) for user in entries))

    def check_dims(self, u: int, r: int, k: int) -> None:
        if len(self.entries) != u or any(len(user) != r for user in self.entries):
            raise SharingError("randomness tape dimensions do not match (u, r)")
        if any(len(row) != k - 1 for user in self.entries for row in user):
            raise SharingError(f"randomness tape needs k-1 = {k - 1} symbols per entry")


def make_share_matrices(
    data: Sequence[Sequence[int]],
    params: SssParams,
    randomness: RandomnessTape,
) -> List[ShareMatrix]:
    """Encode every data entry with its masking symbols into n share matrices.

    data is u users of length-r vectors; output h has entry (l, i) equal to the
    degree < k polynomial [x_{i,l}, tape...] evaluated at alpha_h.
    """
    u = len(data)
    if u == 0:
        raise SharingError("need at least one user")
    r = len(data[0])
    if any(len(x) != r for x in data):
        raise SharingError("all users must have data of the same length r")
    randomness.check_dims(u, r, params.k)
    f = params.field
    matrices = []
    for h, alpha in enumerate(params.eval_points):
        rows = []
        for l in range(r):
            rows.append(
                tuple(
                    f.poly_eval((data[i][l],) + randomness.entries[i][l], alpha)
                    for i in range(u)
                )
            )
        matrices.append(ShareMatrix(h=h, entries=tuple(rows)))
    return matrices


def reconstruct(shares: Sequence[Tuple[int, int]], params: SssParams) -> int:
    """Recover the secret from >= k (point, value) pairs.

    Deterministically uses the k lowest-indexed points after sorting.
    """
    if len(shares) < params.k:
        raise SharingError(
            f"insufficient shares: got {len(shares)}, need k={params.k}"
        )
    pts = [p for p, _ in shares]
    if len(set(pts)) != len(pts):
        raise SharingError("shares must have distinct evaluation points")
    chosen = sorted(shares)[: params.k]
    return params.field.lagrange_interpolate_at(chosen, 0)


def decode_computation(
    products: Mapping[int, Sequence[Sequence[int]]],
    params: SssParams,
) -> List[List[int]]:
    """Decode {W . S^(h) | h in I}, |I| = k, into W . X by element-wise interpolation.

    Each scalar position across the k product matrices is one RS codeword
    restricted to the points in I.
    """
    if len(products) != params.k:
        raise SharingError(
            f"need exactly k={params.k} products, got {len(products)}"
        )
    hs = sorted(products)
    if any(not 0 <= h < params.n for h in hs):
        raise SharingError("share index out of range")
    first = products[hs[0]]
    rows = len(first)
    cols = len(first[0]) if rows else 0
    for h in hs:
        mat = products[h]
        if len(mat) != rows or any(len(row) != cols for row in mat):
            raise SharingError("product matrices have mismatched dimensions")
    f = params.field
    out = []
    for a in range(rows):
        out_row = []
        for b in range(cols):
            pairs = [(params.eval_points[h], products[h][a][b]) for h in hs]
            out_row.append(f.lagrange_interpolate_at(pairs, 0))
        out.append(out_row)
    return out


def leakage_distribution(
    observed: Sequence[Tuple[int, int]],
    params: SssParams,
) -> Dict[int, int]:
    """Exact conditional histogram over candidate secrets given < k observations.

    For each candidate secret, counts the randomness tapes consistent with the
    observed (point, value) pairs by exhaustive enumeration. Perfect privacy
    means the histogram is uniform. Only sensible at tiny q.
    """
    if not 1 <= len(observed) <= params.k - 1:
        raise SharingError(
            f"need between 1 and k-1 = {params.k - 1} observations, got {len(observed)}"
        )
    pts = [p for p, _ in observed]
    if len(set(pts)) != len(pts):
        raise SharingError("observation points must be distinct")
    q = params.field.q
    if q ** (params.k - 1) > 10**7:
        raise SharingError("enumeration too large; use a smaller field or k")
    f = params.field
    hist = dict.fromkeys(range(q), 0)
    for secret in range(q):
        for tape in itertools.product(range(q), repeat=params.k - 1):
            coeffs = (secret,) + tape
            if all(f.poly_eval(coeffs, p) == v for p, v in observed):
                hist[secret] += 1
    return hist


def secret_value_table(
    points: Sequence[int],
    params: SssParams,
) -> Dict[Tuple[int, ...], Dict[int, int]]:
    """Joint table: observed-value vector at `points` -> secret -> tape count.

    Forward enumeration over all (secret, tape) pairs; the privacy audit checks
    every row for uniformity. Equivalent to calling leakage_distribution for
    every value vector, but one pass of q^k work instead of q^(k-1+|points|).
    """
    if len(set(points)) != len(points):
        raise SharingError("observation points must be distinct")
    q = params.field.q
    if q**params.k > 4 * 10**6:
        raise SharingError("enumeration too large; use a smaller field or k")
    f = params.field
    table: Dict[Tuple[int, ...], Dict[int, int]] = {}
    for secret in range(q):
        for tape in itertools.product(range(q), repeat=params.k - 1):
            coeffs = (secret,) + tape
            key = tuple(f.poly_eval(coeffs, p) for p in points)
            row = table.setdefault(key, dict.fromkeys(range(q), 0))
            row[secret] += 1
    return table
