"""Sweep CSV parsing and validation.

The interchange format is the CSV emitted by the experiment CLI's sweep
subcommand, header exactly: scheme,z,gamma,cost,se,e,n,p,t. One curve is the
sequence of rows sharing (scheme, z), in file order; gamma must be strictly
increasing within a curve.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Dict, List, Tuple

EXPECTED_COLUMNS = ["scheme", "z", "gamma", "cost", "se", "e", "n", "p", "t"]

_INT_COLUMNS = ("z", "e", "n", "p", "t")
_FLOAT_COLUMNS = ("gamma", "cost", "se")


class TableError(ValueError):
    """Raised for malformed sweep CSVs; message names the row or column."""


@dataclass(frozen=True)
class Row:
    scheme: str
    z: int
    gamma: float
    cost: float
    se: float
    e: int
    n: int
    p: int
    t: int


@dataclass(frozen=True)
class Curve:
    scheme: str
    z: int
    gammas: Tuple[float, ...]
    costs: Tuple[float, ...]
    ses: Tuple[float, ...]

    @property
    def label(self) -> str:
        if self.scheme == "baseline":
            return "nonprivate"
        return f"private z={self.z}"


@dataclass(frozen=True)
class SweepTable:
    path: str
    rows: Tuple[Row, ...]

    def curves(self) -> List[Curve]:
        grouped: Dict[Tuple[str, int], List[Row]] = {}
        for row in self.rows:
            grouped.setdefault((row.scheme, row.z), []).append(row)
        out = []
        for (scheme, z), rows in grouped.items():
            gammas = [r.gamma for r in rows]
            if any(b <= a for a, b in zip(gammas, gammas[1:])):
                raise TableError(
                    f"{self.path}: gamma not strictly increasing within "
                    f"curve ({scheme}, z={z}): {gammas}"
                )
            out.append(
                Curve(
                    scheme=scheme,
                    z=z,
                    gammas=tuple(gammas),
                    costs=tuple(r.cost for r in rows),
                    ses=tuple(r.se for r in rows),
                )
            )
        # Baseline first, then private by rising z: matches legend order.
        out.sort(key=lambda c: (c.scheme != "baseline", c.z))
        return out


def _convert(path: str, lineno: int, name: str, raw: str):
    try:
        if name in _INT_COLUMNS:
            return int(raw)
        if name in _FLOAT_COLUMNS:
            value = float(raw)
            if name != "gamma" and value < 0:
                raise ValueError("negative")
            return value
        if not raw:
            raise ValueError("empty")
        return raw
    except ValueError as exc:
        raise TableError(
            f"{path}: row {lineno}: bad value for column '{name}': {raw!r}"
        ) from exc


def load_sweep_csv(path: str) -> SweepTable:
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TableError(f"{path}: empty file, expected header row") from None
        for name in EXPECTED_COLUMNS:
            if name not in header:
                raise TableError(f"{path}: missing column '{name}'")
        extra = [name for name in header if name not in EXPECTED_COLUMNS]
        if extra:
            raise TableError(f"{path}: unexpected column '{extra[0]}'")
        index = {name: header.index(name) for name in EXPECTED_COLUMNS}
        rows = []
        for lineno, record in enumerate(reader, 2):
            if len(record) != len(header):
                raise TableError(
                    f"{path}: row {lineno}: expected {len(header)} fields, "
                    f"got {len(record)}"
                )
            values = {
                name: _convert(path, lineno, name, record[index[name]])
                for name in EXPECTED_COLUMNS
            }
            rows.append(Row(**values))
    return SweepTable(path=path, rows=tuple(rows))
