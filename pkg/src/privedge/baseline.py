"""Nonprivate reference scheme used for latency-ratio comparisons.

Documented approximation: only the broadcast upload cost gamma*r*log(e) and
the qualitative structure (MDS/repetition storage, beamformed download) of
the reference scheme are specified here. Every node receives the raw data in
one broadcast, computes its p assigned partitions in storage order, and each
partition needs a single result to decode; repeated results across nodes
raise the download multiplicity exactly as in the private scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .assignment import build_iw, default_generator
from .latency import SetupTimes, SimulationError, SystemParams
from .optimizer import OptimizerError, TupleResult, _mean_se, setup_matrix


@dataclass(frozen=True)
class BaselineConfig:
    """e nodes, p stored partitions each, wait threshold t in 1..p."""

    e: int
    p: int
    t: int = 1
    include_upload: bool = True

    def __post_init__(self):
        if not 1 <= self.p <= self.e:
            raise SimulationError(f"need 1 <= p <= e, got p={self.p}, e={self.e}")
        if not 1 <= self.t <= self.p:
            raise SimulationError(
                f"wait count exceeds available IRs: t={self.t} > p={self.p}"
            )


class BaselineEngine:
    """Vectorized nonprivate latency over a batch of setup-time draws."""

    def __init__(self, config: BaselineConfig, params: SystemParams, lam: np.ndarray):
        if lam.ndim != 2 or lam.shape[1] != config.e:
            raise SimulationError("lam must have shape (trials, e)")
        self.config = config
        self.params = params
        e, p = config.e, config.p
        up = params.gamma * params.r * math.log(e) if config.include_upload and e > 1 else 0.0
        times = up + lam[:, :, None] + np.arange(1, p + 1) * (params.m / e)
        iw = build_iw(e, p, default_generator(e))
        part = np.array([[iw[l][j] for l in range(p)] for j in range(e)])  # (e, p)
        flat = times.reshape(lam.shape[0], e * p)
        order = np.argsort(part.reshape(-1), kind="stable")
        self._flat = flat[:, order]  # grouped by partition, p entries each
        self._sorted_by_part = np.sort(self._flat.reshape(-1, e, p), axis=2)

    @property
    def max_wait(self) -> int:
        return self.config.p

    def overall(self, t: Optional[int] = None) -> np.ndarray:
        if t is None:
            t = self.config.t
        if not 1 <= t <= self.config.p:
            raise SimulationError(
                f"wait count exceeds available IRs: t={t} > p={self.config.p}"
            )
        e, p = self.config.e, self.config.p
        stop = self._sorted_by_part[:, :, t - 1].max(axis=1)
        mask = (self._flat <= stop[:, None]).astype(np.int64)
        rho = mask.reshape(-1, e, p).sum(axis=2)
        comm = self.params.gamma * (1.0 / np.minimum(rho, self.params.u)).sum(axis=1)
        return stop + comm


def simulate_nonprivate(
    params: SystemParams,
    config: BaselineConfig,
    setup: Optional[SetupTimes] = None,
    seed: Optional[int] = None,
) -> float:
    """Overall nonprivate latency for one setup-time draw."""
    if setup is None:
        from .latency import sample_setup_times

        setup = sample_setup_times(params.eta, config.e, seed, params.tau)
    lam = np.array([setup.values])
    return float(BaselineEngine(config, params, lam).overall()[0])


def optimize_baseline(
    params: SystemParams,
    trials: int,
    seed: int,
    include_upload: bool = True,
    lam: Optional[np.ndarray] = None,
) -> Tuple[TupleResult, Tuple[TupleResult, ...]]:
    """Exhaustive search over (e, p <= mu*e, t <= p); same CRN draws as optimize()."""
    if lam is None:
        lam = setup_matrix(params, trials, seed)
    table: List[TupleResult] = []
    for e in range(1, params.e_max + 1):
        p_max = math.floor(params.mu * e)
        for p in range(1, p_max + 1):
            config = BaselineConfig(e=e, p=p, include_upload=include_upload)
            engine = BaselineEngine(config, params, lam[:, :e])
            for t in range(1, p + 1):
                mean, se = _mean_se(engine.overall(t))
                # n/k/a have no meaning here; report n=e (raw data everywhere).
                table.append(TupleResult(e, e, p, 1, 0, t, mean, se))
    if not table:
        raise OptimizerError("no feasible baseline configuration")
    best = min(table, key=lambda row: (row.mean, row.e, row.p, row.t))
    return best, tuple(table)
