"""Exact arithmetic in a prime field GF(q) plus polynomial helpers.

All values are canonical residues in [0, q). Intermediate products use
Python's arbitrary-precision integers, so no overflow is possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple


class FieldError(ValueError):
    """Raised on invalid field construction or operations (e.g. inv(0))."""


def is_prime(q: int) -> bool:
    """Trial-division primality check; fine for q < 2^31."""
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=32)
def _inverse_table(q: int) -> Tuple[int, ...]:
    # Only built for small q (brute-force test scale).
    return tuple(pow(v, q - 2, q) if v else 0 for v in range(q))


@dataclass(frozen=True)
class PrimeField:
    """The field GF(q) for a prime modulus q."""

    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise FieldError(f"modulus {self.q} is not prime")

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value % self.q)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise FieldError("division by zero in GF(q)")
        if self.q <= 1024:
            return _inverse_table(self.q)[a]
        return pow(a, self.q - 2, self.q)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, exponent: int) -> int:
        if exponent < 0:
            return pow(self.inv(a), -exponent, self.q)
        return pow(a % self.q, exponent, self.q)

    def poly_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate sum(coeffs[d] * x^d) by Horner's rule; coeffs[0] is the constant term."""
        if not coeffs:
            raise FieldError("empty coefficient list")
        q = self.q
        x %= q
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % q
        return acc

    def lagrange_interpolate_at(self, points: Sequence[Tuple[int, int]], x0: int) -> int:
        """Value at x0 of the unique degree < len(points) polynomial through the points."""
        if not points:
            raise FieldError("need at least one interpolation point")
        xs = [x % self.q for x, _ in points]
        if len(set(xs)) != len(xs):
            raise FieldError("duplicate x-coordinates in interpolation")
        q = self.q
        x0 %= q
        total = 0
        for i, (xi, yi) in enumerate(points):
            xi %= q
            num = 1
            den = 1
            for j, (xj, _) in enumerate(points):
                if i == j:
                    continue
                num = num * (x0 - xj) % q
                den = den * (xi - xj) % q
            total = (total + yi * num * self.inv(den)) % q
        return total


@dataclass(frozen=True)
class FieldElement:
    """An immutable element of a PrimeField."""

    field: PrimeField
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise FieldError(f"value {self.value} out of range for GF({self.field.q})")

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise FieldError("operands belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, exponent: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, exponent))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"
