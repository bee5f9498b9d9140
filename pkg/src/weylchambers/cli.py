"""Command-line driver: tables, verification suites, projection, simulation.

Machine-readable records go to stdout (one canonical JSON object per
line, or CSV), human diagnostics to stderr.  Exit codes: 0 success or
all checks passed, 1 a verification verdict failed, 2 usage error.
Rationals are serialized as "num/den" strings, never as floats; every
command takes --seed (default 0), so published output is reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

from .chambers import Chamber, FaceIndex, internal_angle_closed_form, internal_angle_spec
from .projection import certificate, face_dimension_histogram, project
from .simulation import (
    Z_THRESHOLD,
    bernoulli_sum_law,
    estimate_angle_B,
    estimate_angle_D,
    estimate_internal_angle,
    even_cycle_law,
    majorant_segment_law,
    z_test,
)
from .triangles import intrinsic_volume_row
from . import verification

EXPERIMENTS = (
    "facedim",
    "angle-d",
    "angle-b",
    "majorant",
    "even-cycles",
    "bernoulli",
    "internal-angle",
)
SUITES = ("identities", "projection", "montecarlo", "exhaustive", "all")


def _frac(value) -> str:
    return f"{value.numerator}/{value.denominator}"


def _record(command: str, params: dict, results, seed: int, started: float) -> dict:
    return {
        "command": command,
        "params": params,
        "results": results,
        "seed": seed,
        "elapsed_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }


def _emit_json(record: dict) -> None:
    print(json.dumps(record, sort_keys=True, separators=(",", ":")))


def _emit_flat_csv(record: dict) -> None:
    writer = csv.writer(sys.stdout)
    writer.writerow(["key", "value"])
    results = record.get("results", {})
    for key in sorted(results):
        value = results[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, separators=(",", ":"))
        writer.writerow([key, value])


def _report_record(command: str, params: dict, report, seed: int, started: float) -> dict:
    results = {
        "label": report.label,
        "outcomes": {str(k): v for k, v in report.outcomes.items()},
        "n_samples": report.n_samples,
        "exact_law": {str(k): _frac(p) for k, p in report.exact_law.items()},
        "z_scores": {k: (v if math.isfinite(v) else "inf") for k, v in report.z_scores.items()},
        "passed": report.passed,
    }
    return _record(command, params, results, seed, started)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_table(args) -> int:
    started = time.perf_counter()
    rows = [intrinsic_volume_row(args.family, n) for n in _table_range(args)]
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["family", "n", "k", "value_num", "value_den"])
        for row in rows:
            for k, v in enumerate(row.values):
                writer.writerow([row.family, row.n, k, v.numerator, v.denominator])
        return 0
    for row in rows:
        record = _record(
            "table",
            {"family": args.family, "n": row.n},
            {"values": [_frac(v) for v in row.values]},
            args.seed,
            started,
        )
        _emit_json(record)
    return 0


def _table_range(args):
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    return range(1, args.n + 1)


def cmd_project(args) -> int:
    started = time.perf_counter()
    chamber = Chamber(args.family, len(args.values))
    result = project(chamber, args.values)
    cert = certificate(chamber, args.values, result)
    record = _record(
        "project",
        {"family": args.family, "point": list(args.values)},
        {
            "projection": [float(v) for v in result.point],
            "face_dim": result.face_dim,
            "blocks": [[length, value] for length, value in result.blocks],
            "certificate": {
                "feasibility_gap": cert.feasibility_gap,
                "dual_gap": cert.dual_gap,
                "orthogonality_gap": cert.orthogonality_gap,
            },
        },
        args.seed,
        started,
    )
    _emit_json(record) if args.format == "json" else _emit_flat_csv(record)
    return 0


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    shards = args.threads
    name = args.experiment
    params: dict = {"experiment": name, "samples": args.samples, "threads": args.threads}

    if name == "facedim":
        _need(args, "family", "n")
        chamber = Chamber(args.family, args.n)
        counts = face_dimension_histogram(
            chamber, args.samples, args.seed, shards, args.threads
        )
        law = dict(enumerate(intrinsic_volume_row(args.family, args.n).values))
        report = z_test(
            f"face-dimensions {args.family} n={args.n}",
            {k: int(c) for k, c in enumerate(counts)},
            law,
            args.samples,
            args.seed,
        )
        params.update(family=args.family, n=args.n)
    elif name == "angle-d":
        _need(args, "m")
        report = estimate_angle_D(args.m, args.samples, args.seed, shards, args.threads)
        params.update(m=args.m)
    elif name == "angle-b":
        _need(args, "m")
        report = estimate_angle_B(args.m, args.samples, args.seed, shards, args.threads)
        params.update(m=args.m)
    elif name == "majorant":
        _need(args, "n")
        report = majorant_segment_law(args.n, args.samples, args.seed, shards, args.threads)
        params.update(n=args.n)
    elif name == "even-cycles":
        _need(args, "kind", "n")
        report = even_cycle_law(args.kind, args.n, args.samples, args.seed, shards, args.threads)
        params.update(kind=args.kind, n=args.n)
    elif name == "bernoulli":
        _need(args, "family", "n")
        report = bernoulli_sum_law(args.family, args.n, args.samples, args.seed, shards, args.threads)
        params.update(family=args.family, n=args.n)
    else:  # internal-angle
        _need(args, "family", "n")
        face = FaceIndex(args.family, args.n, tuple(args.ls or ()))
        desc = internal_angle_spec(face)
        estimate = estimate_internal_angle(desc, args.samples, args.seed, shards, args.threads)
        closed = internal_angle_closed_form(desc)
        results = {
            "sizes": list(desc.sizes),
            "family": desc.family,
            "estimate": estimate.value,
            "std_error": estimate.std_error,
            "n_samples": estimate.n_samples,
        }
        passed = True
        if closed is not None:
            results["closed_form"] = closed
            if estimate.std_error > 0:
                z = (estimate.value - closed) / estimate.std_error
                results["z"] = z
                passed = abs(z) <= Z_THRESHOLD
            else:
                passed = estimate.value == closed
        results["passed"] = passed
        params.update(family=args.family, n=args.n, ls=list(args.ls or ()))
        record = _record("simulate", params, results, args.seed, started)
        _emit_json(record) if args.format == "json" else _emit_flat_csv(record)
        return 0 if passed else 1

    record = _report_record("simulate", params, report, args.seed, started)
    _emit_json(record) if args.format == "json" else _emit_flat_csv(record)
    return 0 if report.passed else 1


def _need(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"experiment {args.experiment!r} requires --{name}")


def cmd_verify(args) -> int:
    started = time.perf_counter()
    shards = args.threads
    checks = []
    if args.suite in ("identities", "all"):
        checks.extend(verification.identity_checks(args.n_max))
        checks.append(verification.triangle_consistency_check(args.n_max))
        checks.append(verification.volume_table_check(30))
    if args.suite in ("exhaustive", "all"):
        checks.extend(verification.exhaustive_checks())
    if args.suite in ("projection", "all"):
        checks.extend(verification.projection_oracle_checks(args.points, args.seed))
    if args.suite in ("montecarlo", "all"):
        checks.extend(
            verification.montecarlo_checks(args.samples, args.seed, shards, args.threads)
        )

    all_passed = True
    for check in checks:
        all_passed &= check.passed
        print(f"{'PASS' if check.passed else 'FAIL'} {check.name}", file=sys.stderr)
        record = _record(
            "verify",
            {"suite": args.suite, "check": check.name},
            {"passed": check.passed, "details": check.details},
            args.seed,
            started,
        )
        if args.format == "json":
            _emit_json(record)
        else:
            _emit_flat_csv(record)
    summary = "all checks passed" if all_passed else "some checks FAILED"
    print(f"verify --suite {args.suite}: {summary}", file=sys.stderr)
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(parser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads; also the shard count (default 1)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylchambers",
        description="Exact tables, projections and seeded simulations for the "
        "order cones of types A, B and D.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="exact intrinsic-volume rows")
    p.add_argument("--family", choices=("A", "B", "D"), required=True)
    p.add_argument("--n", "--n-max", dest="n", type=int, required=True,
                   help="largest row to emit")
    _add_common(p)
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, default=100)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--points", type=int, default=1000,
                   help="points per projection-oracle case")
    _add_common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("project", help="project a point onto a chamber")
    p.add_argument("--family", choices=("A", "B", "D"), required=True)
    p.add_argument("values", nargs="+", type=float, help="point coordinates")
    _add_common(p)
    p.set_defaults(handler=cmd_project)

    p = sub.add_parser("simulate", help="run one seeded experiment")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--family", choices=("A", "B", "D"))
    p.add_argument("--kind", choices=("signed", "dperm"))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--ls", type=int, nargs="*",
                   help="face index tuple for internal-angle")
    p.add_argument("--samples", "--trials", dest="samples", type=int, default=100_000)
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
