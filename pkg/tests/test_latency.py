import math
import random

import numpy as np
import pytest

from privedge.assignment import build_plan
from privedge.latency import (
    LatencyEngine,
    ScheduleTrace,
    SetupTimes,
    SimulationError,
    StopRule,
    SystemParams,
    download_latency,
    nonprivate_upload_latency,
    overall_latency,
    sample_setup_times,
    schedule_segments,
    simulate,
    upload_times,
)


def naive_schedule_oracle(plan, params, setup, t, include_upload=True):
    """Independent event-enumeration oracle: recompute everything per prefix.

    Returns (lcomp, stop (j, h, l), rho dict).
    """
    g, r, e = params.gamma, params.r, plan.e
    up = [
        [g * r * (e * h + j + 1) if include_upload else 0.0 for h in range(plan.a)]
        for j in range(e)
    ]
    slot = plan.p * params.m / e
    starts = []
    for j in range(e):
        row = [setup.values[j] + up[j][0]]
        for h in range(1, plan.a):
            row.append(max(row[h - 1] + slot, up[j][h]))
        starts.append(row)
    events = sorted(
        (starts[j][h] + (l + 1) * (params.m / e), j, h, l)
        for j in range(e)
        for h in range(plan.a)
        for l in range(plan.p)
    )
    for idx in range(len(events)):
        done = events[: idx + 1]
        ok = True
        for part in range(e):
            irs = [
                (j, h, l)
                for (_, j, h, l) in done
                if plan.iw_cols[j][l] == part
            ]
            distinct = {plan.is_cols[j][h] for (j, h, l) in irs}
            if len(irs) < t or len(distinct) < plan.k:
                ok = False
                break
        if ok:
            lcomp, j_s, h_s, l_s = events[idx]
            rho = {}
            for time, j, h, l in events:
                if time <= lcomp:
                    key = (plan.iw_cols[j][l], plan.is_cols[j][h])
                    rho[key] = rho.get(key, 0) + 1
            return lcomp, (j_s, h_s, l_s), rho
    raise AssertionError("oracle: stop rule never satisfied")


def test_setup_times_deterministic():
    a = sample_setup_times(0.8, 6, 123, 0.0005)
    b = sample_setup_times(0.8, 6, 123, 0.0005)
    assert a == b
    assert a != sample_setup_times(0.8, 6, 124, 0.0005)


def test_setup_times_mean():
    draws = sample_setup_times(2.0, 200_000, 0)
    assert np.mean(draws.values) == pytest.approx(0.5, rel=0.02)


def test_setup_times_degenerate_rate():
    draws = sample_setup_times(1e9, 1000, 5)
    assert max(draws.values) < 1e-6


def test_setup_times_seedless_zero():
    assert sample_setup_times(0.8, 4, None).values == (0.0,) * 4


def test_upload_closed_form():
    plan = build_plan(5, 5, 3, 1)  # a = 2
    params = SystemParams(gamma=1.0, r=50, z=1)
    up = upload_times(plan, params)
    for j in range(5):
        for h in range(2):
            assert up[j][h] == 50 * (5 * h + j + 1)
    assert up[0][0] == params.gamma * params.r
    assert up[4][1] == 500
    # Total upload = gamma * r * e * a.
    assert max(max(row) for row in up) == params.gamma * params.r * 5 * 2


def test_nonprivate_upload_is_log_broadcast():
    params = SystemParams(gamma=8.0, r=50, z=0)
    assert nonprivate_upload_latency(params, 9) == pytest.approx(8 * 50 * math.log(9))


def test_simulate_zero_setup_matches_oracle():
    plan = build_plan(5, 5, 3, 1)  # k = 3
    params = SystemParams(gamma=0.0, z=1)
    setup = SetupTimes((0.0,) * 5)
    trace = simulate(plan, params, setup, StopRule(3))
    lcomp, stop, rho = naive_schedule_oracle(plan, params, setup, 3)
    assert trace.lcomp == lcomp
    assert trace.stop == stop
    assert trace.rho == rho


def test_single_node_degenerate_pipeline():
    plan = build_plan(1, 1, 1, 0)
    params = SystemParams(gamma=2.0, r=10, m=30, z=0, e_max=1)
    setup = SetupTimes((7.0,))
    trace = simulate(plan, params, setup, StopRule(1))
    # lambda + gamma*r + (whole of W: e = 1 partition of m rows)
    assert trace.lcomp == pytest.approx(7.0 + 2.0 * 10 + 30.0)


def test_exhaustion_wait_count():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=1.0, z=1)
    setup = sample_setup_times(0.8, 5, 9, 0.0005)
    supply = plan.a * plan.p
    trace = simulate(plan, params, setup, StopRule(supply))
    # Every IR computed: lcomp is the global last completion.
    slot = plan.p * params.m / plan.e
    starts = trace.starts
    last = max(
        starts[j][plan.a - 1] + plan.p * (params.m / plan.e) for j in range(5)
    )
    assert trace.lcomp == pytest.approx(last)
    assert sum(trace.rho.values()) == 5 * supply


def test_wait_count_bounds():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(z=1)
    setup = SetupTimes((0.0,) * 5)
    with pytest.raises(SimulationError, match="below threshold"):
        simulate(plan, params, setup, StopRule(plan.k - 1))
    with pytest.raises(SimulationError, match="exceeds available"):
        simulate(plan, params, setup, StopRule(plan.a * plan.p + 1))
    with pytest.raises(SimulationError):
        StopRule(0)


def test_start_recursion_invariants():
    plan = build_plan(6, 6, 4, 1)
    params = SystemParams(gamma=4.0, z=1)
    setup = sample_setup_times(0.8, 6, 17, 0.0005)
    trace = simulate(plan, params, setup, StopRule(plan.k))
    slot = plan.p * params.m / plan.e
    for j in range(6):
        for h in range(1, plan.a):
            s = trace.starts[j][h]
            assert s >= trace.upload[j][h]
            assert s >= trace.starts[j][h - 1] + slot
            assert s == trace.upload[j][h] or s == trace.starts[j][h - 1] + slot


def test_stop_rule_is_tight():
    # At lcomp every partition satisfies the rule; just before, some does not.
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=1.0, z=1)
    setup = sample_setup_times(0.8, 5, 23, 0.0005)
    t = 4
    trace = simulate(plan, params, setup, StopRule(t))
    lcomp, stop, rho = naive_schedule_oracle(plan, params, setup, t)
    assert trace.lcomp == lcomp and trace.stop == stop


def _trace_with_rho(rho, lcomp=100.0):
    return ScheduleTrace(upload=[], starts=[], rho=rho, stop=(0, 0, 0), lcomp=lcomp)


def test_download_no_beamforming_gain():
    plan = build_plan(5, 5, 3, 1)  # k = 3
    params = SystemParams(gamma=2.0, u=4, z=1)
    rho = {(l, h): 1 for l in range(5) for h in range(5)}
    trace = _trace_with_rho(rho)
    assert download_latency(trace, plan, params) == pytest.approx(2.0 * 5 * 3)


def test_download_saturated():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=2.0, u=2, z=1)
    rho = {(l, h): 3 for l in range(5) for h in range(5)}
    trace = _trace_with_rho(rho)
    assert download_latency(trace, plan, params) == pytest.approx(2.0 * 5 * 3 / 2)


def test_download_mixed_multiplicities():
    plan = build_plan(4, 2, 4, 1)  # full storage, a = 1, k = 2
    params = SystemParams(gamma=1.0, u=2, z=1)
    rho = {}
    for l in range(4):
        rho[(l, 0)] = 2 if l == 0 else 1
        rho[(l, 1)] = 1
    trace = _trace_with_rho(rho)
    # l=0: top-2 rho (2,1) -> 1/2 + 1; the other three partitions: (1,1) -> 2.
    assert download_latency(trace, plan, params) == pytest.approx(1.5 + 3 * 2.0)


def test_download_requires_k_distinct():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(z=1)
    rho = {(l, 0): 1 for l in range(5)}
    with pytest.raises(SimulationError, match="distinct"):
        download_latency(_trace_with_rho(rho), plan, params)


def test_download_monotone_in_multiplicity():
    plan = build_plan(4, 2, 4, 1)
    params = SystemParams(gamma=1.0, u=3, z=1)
    base = {(l, h): 1 for l in range(4) for h in range(2)}
    base[(2, 1)] = 2
    cost = download_latency(_trace_with_rho(dict(base)), plan, params)
    base[(2, 1)] = 3
    assert download_latency(_trace_with_rho(dict(base)), plan, params) <= cost


def test_overall_latency_composition():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=0.0, z=1)
    setup = sample_setup_times(0.8, 5, 3, 0.0005)
    trace = simulate(plan, params, setup, StopRule(plan.k))
    with pytest.raises(SimulationError):
        overall_latency(trace)  # download not yet computed
    download_latency(trace, plan, params)
    assert trace.lcomm == 0.0  # gamma = 0
    assert overall_latency(trace) == trace.lcomp


def test_overall_monotone_in_wait_count():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=1.0, z=1)
    setup = sample_setup_times(0.8, 5, 31, 0.0005)
    prev = -1.0
    for t in range(plan.k, plan.a * plan.p + 1):
        trace = simulate(plan, params, setup, StopRule(t))
        assert trace.lcomp >= prev
        prev = trace.lcomp


def test_multiplicity_conservation():
    plan = build_plan(6, 6, 4, 1)
    params = SystemParams(gamma=2.0, z=1)
    setup = sample_setup_times(0.8, 6, 11, 0.0005)
    trace = simulate(plan, params, setup, StopRule(plan.k + 2))
    slot_times = [
        trace.starts[j][h] + (l + 1) * (params.m / plan.e)
        for j in range(6)
        for h in range(plan.a)
        for l in range(plan.p)
    ]
    completed = sum(1 for t in slot_times if t <= trace.lcomp)
    assert sum(trace.rho.values()) == completed


def random_feasible_plan(rng, e_hi=6):
    while True:
        e = rng.randrange(1, e_hi + 1)
        n = rng.randrange(1, e + 1)
        p = rng.randrange(1, e + 1)
        z = rng.randrange(0, 3)
        try:
            return build_plan(e, n, p, z)
        except Exception:
            continue


def test_simulate_matches_oracle_randomized():
    rng = random.Random(2024)
    for i in range(60):
        plan = random_feasible_plan(rng)
        params = SystemParams(
            gamma=rng.choice([0.0, 0.5, 2.0, 8.0]),
            m=rng.choice([60, 600]),
            z=plan.z,
        )
        setup = (
            SetupTimes((0.0,) * plan.e)
            if i % 5 == 0
            else sample_setup_times(0.8, plan.e, i, 0.0005)
        )
        t = rng.randrange(plan.k, plan.a * plan.p + 1)
        trace = simulate(plan, params, setup, StopRule(t))
        lcomp, stop, rho = naive_schedule_oracle(plan, params, setup, t)
        assert trace.lcomp == lcomp
        assert trace.stop == stop
        assert trace.rho == rho


def test_engine_matches_simulate():
    # The vectorized Monte Carlo path must agree bit-for-bit with simulate().
    rng = random.Random(7)
    for i in range(40):
        plan = random_feasible_plan(rng)
        params = SystemParams(gamma=rng.choice([0.0, 1.0, 8.0]), z=plan.z)
        lam_rows = np.stack(
            [
                np.array(sample_setup_times(0.8, plan.e, 100 + i * 3 + s, 0.0005).values)
                for s in range(3)
            ]
        )
        engine = LatencyEngine(plan, params, lam_rows)
        for t in range(plan.k, plan.a * plan.p + 1):
            batch = engine.overall(t)
            for s in range(3):
                setup = SetupTimes(tuple(lam_rows[s]))
                trace = simulate(plan, params, setup, StopRule(t))
                download_latency(trace, plan, params)
                assert batch[s] == trace.overall


def test_segments_idle_rule():
    # Idle segment exists exactly when the next upload lands after compute ends.
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=8.0, z=1)  # large gamma forces idle gaps
    setup = SetupTimes((0.0,) * 5)
    segs = schedule_segments(plan, params, setup)
    slot = plan.p * params.m / plan.e
    for j in range(5):
        kinds = [s.kind for s in segs[j]]
        assert "setup" not in kinds  # lambda = 0
        has_idle = "idle" in kinds
        up1 = params.gamma * params.r * (plan.e * 1 + j + 1)
        start0 = params.gamma * params.r * (j + 1)
        assert has_idle == (up1 > start0 + slot)


def test_segments_cover_stop_time():
    plan = build_plan(5, 5, 3, 1)
    params = SystemParams(gamma=1.0, z=1)
    setup = sample_setup_times(0.8, 5, 77, 0.0005)
    trace = simulate(plan, params, setup, StopRule(plan.k))
    segs = schedule_segments(plan, params, setup)
    j, h, l = trace.stop
    compute_segs = [s for s in segs[j] if s.kind == "compute"]
    assert compute_segs[h].start == trace.starts[j][h]
    assert compute_segs[-1].end >= trace.lcomp
