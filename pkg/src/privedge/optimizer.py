"""Exhaustive search over (e, n, p) and the wait count t by Monte Carlo.

The setup-time draws are a single (trials x e_max) matrix generated from the
experiment seed; every tuple (and every privacy level sharing the seed) uses
the first e columns, giving common random numbers across the whole search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .assignment import AssignmentError, AssignmentPlan, build_plan
from .latency import LatencyEngine, SystemParams


class OptimizerError(ValueError):
    """Raised when the search space is empty."""


@dataclass(frozen=True)
class TupleResult:
    e: int
    n: int
    p: int
    k: int
    a: int
    t: int
    mean: float
    se: float


@dataclass(frozen=True)
class OptimizationResult:
    best: TupleResult
    table: Tuple[TupleResult, ...]
    trials: int
    seed: int


def enumerate_space(params: SystemParams) -> List[AssignmentPlan]:
    """All plans with e <= e_max, p <= mu*e, k = a*z + 1 <= n <= e, coverage OK."""
    plans = []
    for e in range(1, params.e_max + 1):
        p_max = math.floor(params.mu * e)
        for p in range(1, p_max + 1):
            for n in range(1, e + 1):
                try:
                    plans.append(build_plan(e, n, p, params.z))
                except AssignmentError:
                    continue
    return plans


def setup_matrix(params: SystemParams, trials: int, seed: int) -> np.ndarray:
    """(trials x e_max) normalized exponential setup delays from one stream."""
    rng = np.random.default_rng(seed)
    return rng.exponential(scale=1.0 / params.eta, size=(trials, params.e_max)) / params.tau


def _mean_se(values: np.ndarray) -> Tuple[float, float]:
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(values.size))


def estimate_expected_latency(
    plan: AssignmentPlan,
    params: SystemParams,
    t: int,
    trials: int,
    seed: int,
    include_upload: bool = True,
) -> Tuple[float, float]:
    """Sample mean and standard error of the overall latency; seed-reproducible."""
    if trials < 1:
        raise OptimizerError("trials must be >= 1")
    lam = setup_matrix(params, trials, seed)[:, : plan.e]
    engine = LatencyEngine(plan, params, lam, include_upload)
    return _mean_se(engine.overall(t))


def optimize(
    params: SystemParams,
    trials: int,
    seed: int,
    include_upload: bool = True,
    lam: Optional[np.ndarray] = None,
) -> OptimizationResult:
    """Evaluate every (tuple, t) pair and return the argmin with the full table.

    A precomputed lam matrix may be passed to share draws across calls (e.g.
    one matrix for a whole gamma sweep).
    """
    plans = enumerate_space(params)
    if not plans:
        raise OptimizerError(f"no feasible configuration for z={params.z}")
    if lam is None:
        lam = setup_matrix(params, trials, seed)
    table = []
    for plan in plans:
        engine = LatencyEngine(plan, params, lam[:, : plan.e], include_upload)
        for t in range(plan.k, engine.max_wait + 1):
            mean, se = _mean_se(engine.overall(t))
            table.append(
                TupleResult(plan.e, plan.n, plan.p, plan.k, plan.a, t, mean, se)
            )
    best = min(table, key=lambda row: (row.mean, row.e, row.n, row.p, row.t))
    return OptimizationResult(best=best, table=tuple(table), trials=trials, seed=seed)


def format_table(result: OptimizationResult) -> str:
    header = f"{'e':>3} {'n':>3} {'p':>3} {'k':>3} {'a':>3} {'t':>3} {'mean':>12} {'se':>10}"
    lines = [header]
    for row in result.table:
        mark = " *" if row == result.best else ""
        lines.append(
            f"{row.e:>3} {row.n:>3} {row.p:>3} {row.k:>3} {row.a:>3} {row.t:>3} "
            f"{row.mean:>12.3f} {row.se:>10.3f}{mark}"
        )
    return "\n".join(lines)
