"""Command-line entry point: verify | sweep | optimize | schedule-dump.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from typing import List, Optional

from .assignment import (
    AssignmentError,
    AssignmentPlan,
    CyclicGenerator,
    build_is,
    build_iw,
    build_plan,
    format_matrix,
    format_plan,
)
from .baseline import optimize_baseline
from .config import ConfigError, ExperimentConfig, load_config
from .field import PrimeField
from .latency import (
    SimulationError,
    StopRule,
    sample_setup_times,
    schedule_segments,
    simulate,
)
from .optimizer import OptimizerError, format_table, optimize, setup_matrix
from .protocol import PublicMatrix, privacy_audit, run_functional

CSV_HEADER = ["scheme", "z", "gamma", "cost", "se", "e", "n", "p", "t"]

EXAMPLE_CYCLE = (0, 3, 1, 4, 2)
EXAMPLE_IW = [(0, 1, 2, 3, 4), (3, 4, 0, 1, 2), (1, 2, 3, 4, 0)]
EXAMPLE_IS_COLS = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]


def _check_example_one(out: io.StringIO) -> bool:
    """Reproduce the reference worked example (e=n=5, p=3, pi=(0 3 1 4 2))."""
    pi = CyclicGenerator.from_cycle(EXAMPLE_CYCLE)
    iw = build_iw(5, 3, pi)
    is_cols, _ = build_is(5, 3, 5, pi)
    out.write("reference example, pi = (0 3 1 4 2), e = n = 5, p = 3\n")
    out.write("I_w:\n" + format_matrix(iw) + "\n")
    is_rows = [tuple(is_cols[j][t] for j in range(5)) for t in range(2)]
    out.write("I_s:\n" + format_matrix(is_rows) + "\n")
    ok = iw == EXAMPLE_IW and list(is_cols) == EXAMPLE_IS_COLS
    out.write("index matrices match reference: %s\n" % ("yes" if ok else "NO"))
    return ok


def verify_report(
    config: ExperimentConfig, plan_override: Optional[AssignmentPlan] = None
) -> tuple[bool, str]:
    """Run all verification checks; returns (passed, report text)."""
    out = io.StringIO()
    passed = _check_example_one(out)

    z = config.z[0] if config.z else 1
    try:
        plan = plan_override or build_plan(config.e, config.n, config.p, z)
    except AssignmentError as exc:
        out.write(f"plan construction failed: {exc}\n")
        return False, out.getvalue()
    out.write("\n" + format_plan(plan) + "\n")

    audit = privacy_audit(plan, PrimeField(7))
    out.write(str(audit) + "\n")
    if not audit.passed:
        passed = False

    # Functional end-to-end equality at enumeration-friendly scale.
    field = PrimeField(11)
    import random

    rng = random.Random(config.seed)
    m, r, u = 2 * plan.e, 4, 2
    W = PublicMatrix.from_rows(
        field, [[rng.randrange(11) for _ in range(r)] for _ in range(m)]
    )
    data = [[rng.randrange(11) for _ in range(r)] for _ in range(u)]
    results, _ = run_functional(data, W, plan, seed=config.seed)
    direct = [
        tuple(sum(row[t] * x[t] for t in range(r)) % 11 for row in W.entries)
        for x in data
    ]
    func_ok = [tuple(v) for v in results] == direct
    out.write(
        "functional recovery equals direct computation: %s\n"
        % ("yes" if func_ok else "NO")
    )
    if not func_ok:
        passed = False
    out.write("verification %s\n" % ("PASSED" if passed else "FAILED"))
    return passed, out.getvalue()


def cmd_verify(config: ExperimentConfig) -> int:
    passed, report = verify_report(config)
    print(report, end="")
    return 0 if passed else 1


def _sweep_rows(config: ExperimentConfig) -> List[List[str]]:
    include_upload = not config.no_upload
    rows = []
    for gamma in config.gamma:
        base_params = config.system_params(z=0, gamma=gamma)
        lam = setup_matrix(base_params, config.trials, config.seed)
        best, _ = optimize_baseline(
            base_params, config.trials, config.seed, include_upload, lam=lam
        )
        rows.append(
            ["baseline", "0", repr(gamma), repr(best.mean), repr(best.se),
             str(best.e), str(best.n), str(best.p), str(best.t)]
        )
        for z in config.z:
            params = config.system_params(z=z, gamma=gamma)
            result = optimize(
                params, config.trials, config.seed, include_upload, lam=lam
            )
            b = result.best
            rows.append(
                ["private", str(z), repr(gamma), repr(b.mean), repr(b.se),
                 str(b.e), str(b.n), str(b.p), str(b.t)]
            )
    return rows


def _write_csv(rows: List[List[str]], out_path: Optional[str]) -> None:
    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)

    if out_path:
        try:
            with open(out_path, "w", newline="") as fh:
                emit(fh)
        except OSError as exc:
            raise ConfigError(f"cannot write {out_path}: {exc}") from exc
        print(f"wrote {out_path}")
    else:
        emit(sys.stdout)


def cmd_sweep(config: ExperimentConfig) -> int:
    _write_csv(_sweep_rows(config), config.out)
    return 0


def cmd_optimize(config: ExperimentConfig) -> int:
    gamma = config.gamma[0] if config.gamma else 8.0
    z = config.z[0] if config.z else 1
    params = config.system_params(z=z, gamma=gamma)
    result = optimize(params, config.trials, config.seed, not config.no_upload)
    print(f"exhaustive search: z={z} gamma={gamma} trials={config.trials} seed={config.seed}")
    print(format_table(result))
    if config.out:
        try:
            with open(config.out, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["e", "n", "p", "k", "a", "t", "mean", "se"])
                for row in result.table:
                    writer.writerow(
                        [row.e, row.n, row.p, row.k, row.a, row.t,
                         repr(row.mean), repr(row.se)]
                    )
        except OSError as exc:
            raise ConfigError(f"cannot write {config.out}: {exc}") from exc
        print(f"wrote {config.out}")
    return 0


def cmd_schedule_dump(config: ExperimentConfig) -> int:
    z = config.z[0] if config.z else 1
    gamma = config.gamma[0] if config.gamma else 8.0
    plan = build_plan(config.e, config.n, config.p, z)
    params = config.system_params(z=z, gamma=gamma)
    setup = sample_setup_times(params.eta, plan.e, config.seed, params.tau)
    t = config.t if config.t is not None else plan.k
    trace = simulate(plan, params, setup, StopRule(t), not config.no_upload)
    segments = schedule_segments(plan, params, setup, not config.no_upload)
    print(format_plan(plan))
    print(f"stop rule: t={t} (k={plan.k})")
    for j, segs in enumerate(segments):
        parts = "  ".join(f"{s.kind} {s.start:.2f}-{s.end:.2f}" for s in segs)
        print(f"node {j}: {parts}")
    j_s, h_s, l_s = trace.stop
    print(f"stop IR: node {j_s}, slot {h_s}, position {l_s}")
    print(f"L_comp = {trace.lcomp:.4f}")
    from .latency import download_latency

    download_latency(trace, plan, params)
    print(f"L_comm = {trace.lcomm:.4f}")
    print(f"L_overall = {trace.overall:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privedge",
        description="Privacy-preserving distributed linear inference: "
        "verification, latency sweeps, and schedule inspection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "sweep", "optimize", "schedule-dump"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--gamma", help="comma-separated list")
        sp.add_argument("--z", help="comma-separated list")
        sp.add_argument("--no-upload", action="store_true", default=None)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--e", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--p", type=int)
        sp.add_argument("--t", type=int)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(
            args.config,
            seed=args.seed,
            trials=args.trials,
            gamma=tuple(float(v) for v in args.gamma.split(",") if v.strip())
            if args.gamma is not None else None,
            z=tuple(int(v) for v in args.z.split(",") if v.strip())
            if args.z is not None else None,
            no_upload=args.no_upload,
            out=args.out,
            e=args.e,
            n=args.n,
            p=args.p,
            t=args.t,
        )
    except (ConfigError, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        if args.command == "optimize":
            return cmd_optimize(config)
        return cmd_schedule_dump(config)
    except (AssignmentError, SimulationError, OptimizerError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
