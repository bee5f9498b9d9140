"""Bundled verification checks used by the CLI and the acceptance tests.

Each check returns a CheckResult with a JSON-ready details payload, so
the CLI can stream machine-readable records while tests assert on the
same objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chambers import (
    Chamber,
    enumerate_faces,
    internal_angle_spec,
    reconstruct_volume,
)
from .projection import certificate, face_dimension_histogram, project, project_bruteforce
from .simulation import (
    estimate_angle_B,
    estimate_angle_D,
    estimate_internal_angle,
    even_cycle_law_exhaustive,
    majorant_segment_law,
)
from .triangles import IDENTITY_NAMES, intrinsic_volume_row, verify_identity

ORACLE_POINT_TOL = 1e-9
CERTIFICATE_TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Exact suites
# ---------------------------------------------------------------------------

def identity_checks(n_max: int) -> list[CheckResult]:
    out = []
    for name in IDENTITY_NAMES:
        report = verify_identity(name, n_max)
        out.append(
            CheckResult(
                f"identity {name}",
                report.ok,
                {
                    "n_max": n_max,
                    "failures": report.failures[:20],
                    "skipped": len(report.skipped),
                },
            )
        )
    return out


def exhaustive_checks(n_max: int = 5) -> list[CheckResult]:
    out = []
    for kind in ("signed", "dperm"):
        for n in range(1, n_max + 1):
            report = even_cycle_law_exhaustive(kind, n)
            out.append(
                CheckResult(
                    f"exhaustive even-cycles {kind} n={n}",
                    report.passed,
                    {"group_order": report.n_samples, "counts": list(report.outcomes.values())},
                )
            )
    return out


def triangle_consistency_check(n_max: int) -> CheckResult:
    """Recurrence rows against polynomial expansion, entrywise."""
    from .triangles import expand_defining_polynomial, triangle

    bad: list[tuple[str, int]] = []
    for kind in ("A", "B", "D"):
        tri = triangle(kind, n_max)
        for n in range(n_max + 1):
            poly = expand_defining_polynomial(kind, n)
            if tuple(poly.coefficient(k) for k in range(n + 1)) != tri.row(n):
                bad.append((kind, n))
    return CheckResult(
        f"triangle recurrence vs expansion n<={n_max}", not bad, {"failures": bad}
    )


def volume_table_check(n_max: int) -> CheckResult:
    """Rows sum to 1 exactly, are nonnegative, and v_0 vanishes for A."""
    bad = []
    for family in ("A", "B", "D"):
        for n in range(1, n_max + 1):
            row = intrinsic_volume_row(family, n)
            if sum(row.values) != 1 or any(v < 0 for v in row.values):
                bad.append((family, n))
            if family == "A" and row.values[0] != 0:
                bad.append((family, n))
    return CheckResult(f"volume rows n<={n_max}", not bad, {"failures": bad})


# ---------------------------------------------------------------------------
# Projection oracle
# ---------------------------------------------------------------------------

def projection_oracle_check(
    family: str, n: int, points: int, seed: int
) -> CheckResult:
    """Fast projection vs brute force, plus optimality certificates."""
    chamber = Chamber(family, n)
    rng = np.random.default_rng([seed, ord(family), n])
    xs = rng.standard_normal((points, n))
    max_point_diff = 0.0
    dim_mismatches = 0
    max_cert = 0.0
    for x in xs:
        fast = project(chamber, x)
        slow = project_bruteforce(chamber, x)
        max_point_diff = max(max_point_diff, float(np.max(np.abs(fast.point - slow.point))))
        if fast.face_dim != slow.face_dim:
            dim_mismatches += 1
        cert = certificate(chamber, x, fast)
        max_cert = max(
            max_cert, cert.feasibility_gap, cert.dual_gap, cert.orthogonality_gap
        )
    passed = (
        max_point_diff <= ORACLE_POINT_TOL
        and dim_mismatches == 0
        and max_cert <= CERTIFICATE_TOL
    )
    return CheckResult(
        f"projection oracle {family} n={n}",
        passed,
        {
            "points": points,
            "max_point_diff": max_point_diff,
            "dim_mismatches": dim_mismatches,
            "max_certificate_gap": max_cert,
        },
    )


def projection_oracle_checks(points: int, seed: int) -> list[CheckResult]:
    return [
        projection_oracle_check(family, n, points, seed)
        for family in ("A", "B", "D")
        for n in range(2, 7)
    ]


# ---------------------------------------------------------------------------
# Monte Carlo suites
# ---------------------------------------------------------------------------

def facedim_check(
    family: str, n: int, samples: int, seed: int, shards: int = 1, threads: int = 1
) -> CheckResult:
    """Empirical face-dimension frequencies within 4 sigma of the table."""
    counts = face_dimension_histogram(Chamber(family, n), samples, seed, shards, threads)
    row = intrinsic_volume_row(family, n)
    worst = 0.0
    passed = True
    for k, p in enumerate(row.values):
        freq = counts[k] / samples
        tol = 4.0 * float(np.sqrt(float(p) * (1.0 - float(p)) / samples))
        gap = abs(freq - float(p))
        if gap > tol:
            passed = False
        if tol > 0:
            worst = max(worst, gap / (tol / 4.0))
        elif gap > 0:
            passed = False
            worst = float("inf")
    return CheckResult(
        f"face-dimension histogram {family} n={n}",
        passed,
        {"samples": samples, "counts": [int(c) for c in counts], "max_abs_z": worst},
    )


def angle_checks(
    samples: int, seed: int, shards: int = 1, threads: int = 1
) -> list[CheckResult]:
    out = []
    for m in range(2, 7):
        rep = estimate_angle_D(m, samples, seed, shards, threads)
        out.append(
            CheckResult(
                f"bridge-angle m={m}", rep.passed, {"z": rep.z_scores, "samples": samples}
            )
        )
    for m in range(1, 7):
        rep = estimate_angle_B(m, samples, seed, shards, threads)
        out.append(
            CheckResult(
                f"walk-angle m={m}", rep.passed, {"z": rep.z_scores, "samples": samples}
            )
        )
    return out


def majorant_check(
    n: int, trials: int, seed: int, shards: int = 1, threads: int = 1
) -> CheckResult:
    rep = majorant_segment_law(n, trials, seed, shards, threads)
    return CheckResult(
        f"majorant segments n={n}",
        rep.passed,
        {"trials": trials, "z": rep.z_scores},
    )


def reconstruction_check(
    family: str,
    n: int,
    samples_per_face: int,
    seed: int,
    shards: int = 1,
    threads: int = 1,
) -> CheckResult:
    """Internal x external reassembly of the volume row at 4 sigma.

    Every face's internal angle is estimated on its own stream; external
    angles are exact, so the per-k tolerance is four propagated standard
    errors (a tiny absolute floor covers the all-exact cases).
    """
    chamber = Chamber(family, n)
    row = intrinsic_volume_row(family, n)
    worst = 0.0
    passed = True
    per_k = {}
    # distinct derived seed per face, so the per-face estimates are
    # independent streams and the variance propagation is honest
    stream = (ord(family) * 101 + n) * 1_000
    for k in range(n + 1):
        estimates = {}
        for face in enumerate_faces(chamber, k):
            desc = internal_angle_spec(face)
            est = estimate_internal_angle(
                desc, samples_per_face, seed * 1_000_000 + stream, shards, threads
            )
            estimates[face] = (est.value, est.std_error)
            stream += 1
        recon = reconstruct_volume(chamber, k, estimates)
        exact = float(row.values[k])
        tol = max(4.0 * recon.std_error, 1e-12)
        gap = abs(recon.value - exact)
        per_k[k] = {"estimate": recon.value, "exact": exact, "se": recon.std_error}
        if gap > tol:
            passed = False
        worst = max(worst, gap / tol if tol > 0 else float("inf"))
    return CheckResult(
        f"volume reconstruction {family} n={n}",
        passed,
        {"samples_per_face": samples_per_face, "per_k": per_k, "worst_ratio": worst},
    )


def montecarlo_checks(
    samples: int, seed: int, shards: int = 1, threads: int = 1
) -> list[CheckResult]:
    out = [
        facedim_check("A", 5, samples, seed, shards, threads),
        facedim_check("B", 4, samples, seed, shards, threads),
        facedim_check("D", 4, samples, seed, shards, threads),
    ]
    out.extend(angle_checks(samples, seed, shards, threads))
    out.append(majorant_check(6, max(samples // 10, 1000), seed, shards, threads))
    out.append(reconstruction_check("A", 4, samples, seed, shards, threads))
    out.append(reconstruction_check("B", 3, samples, seed, shards, threads))
    return out
