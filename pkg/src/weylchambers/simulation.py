"""Stochastic and exhaustive verification of the distributional laws.

Each experiment draws seeded samples, tallies an integer outcome, and
compares the histogram to the exact law by per-cell z-scores at a fixed
threshold (4 sigma by default, cells with tiny expectation pooled into a
tail cell first).  Exhaustive group enumerations bypass statistics and
demand exact equality of counts.

All reference laws come from the triangles module; nothing here
re-derives a probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterator, Mapping

import numpy as np

from .chambers import AngleDescriptor
from .streams import run_sharded, substream
from .triangles import intrinsic_volume_row, row_sum_law, triangle

Z_THRESHOLD = 4.0
MIN_EXPECTED = 10.0

# collinear hull points (probability zero for Gaussian walks) count as
# one linearity segment
_HULL_TOL = 1e-12


@dataclass(frozen=True)
class SimReport:
    """Outcome histogram of one experiment against its exact law."""

    label: str
    outcomes: dict[int, int]
    n_samples: int
    exact_law: dict[int, Fraction]
    z_scores: dict[str, float]
    passed: bool
    seed: int

    def __post_init__(self):
        if sum(self.outcomes.values()) != self.n_samples:
            raise ValueError("outcome counts must sum to n_samples")
        if sum(self.exact_law.values()) != 1:
            raise ValueError("exact law must sum to 1")


def z_test(
    label: str,
    outcomes: Mapping[int, int],
    exact_law: Mapping[int, Fraction],
    n_samples: int,
    seed: int,
    threshold: float = Z_THRESHOLD,
    min_expected: float = MIN_EXPECTED,
) -> SimReport:
    """Per-cell z-scores of a histogram against an exact law.

    z = (count - N p) / sqrt(N p (1-p)) per cell; cells whose expected
    count N p falls below ``min_expected`` are pooled into one tail cell
    before testing.  The verdict passes iff every |z| <= threshold.
    """
    law = {k: Fraction(p) for k, p in exact_law.items()}
    if sum(law.values()) != 1:
        raise ValueError("exact law must sum to 1")
    if n_samples < 100:
        raise ValueError("need n_samples >= 100")
    counts = dict(outcomes)
    if sum(counts.values()) != n_samples:
        raise ValueError("outcome counts must sum to n_samples")
    if any(k not in law for k in counts if counts[k] > 0):
        extra = [k for k in counts if counts[k] > 0 and k not in law]
        law.update({k: Fraction(0) for k in extra})

    cells: list[tuple[str, int, Fraction]] = []
    tail_count, tail_p = 0, Fraction(0)
    pooled = False
    for k in sorted(law):
        expected = n_samples * law[k]
        if expected < min_expected:
            tail_count += counts.get(k, 0)
            tail_p += law[k]
            pooled = True
        else:
            cells.append((str(k), counts.get(k, 0), law[k]))
    if pooled:
        cells.append(("tail", tail_count, tail_p))

    z_scores: dict[str, float] = {}
    for name, count, p in cells:
        mean = n_samples * p
        var = n_samples * p * (1 - p)
        if var == 0:
            z_scores[name] = 0.0 if count == mean else math.inf
        else:
            z_scores[name] = float(count - mean) / math.sqrt(float(var))
    passed = all(abs(z) <= threshold for z in z_scores.values())
    full_outcomes = {k: counts.get(k, 0) for k in sorted(law)}
    return SimReport(label, full_outcomes, n_samples, dict(law), z_scores, passed, seed)


def _binary_report(
    label: str, hits: int, samples: int, p_hit: Fraction, seed: int
) -> SimReport:
    law = {1: p_hit, 0: 1 - p_hit}
    return z_test(label, {1: hits, 0: samples - hits}, law, samples, seed)


# ---------------------------------------------------------------------------
# Solid angles of the normal-cone blocks
# ---------------------------------------------------------------------------

def estimate_angle_D(
    m: int, samples: int, seed: int, shards: int = 1, threads: int = 1
) -> SimReport:
    """Frequency of a Gaussian bridge staying nonpositive, against 1/m.

    The bridge is an iid Gaussian vector centered by its mean, which is
    exactly the standard Gaussian law on the hyperplane of zero-sum
    vectors; the event checks the first m-1 partial sums.
    """
    if m < 1:
        raise ValueError("m must be >= 1")

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        x = rng.standard_normal((count, m))
        x -= x.mean(axis=1, keepdims=True)
        walks = np.cumsum(x[:, : m - 1], axis=1)
        hits = int(np.all(walks <= 0.0, axis=1).sum())
        return np.array([hits], dtype=np.int64)

    hits = int(run_sharded(samples, seed, shards, threads, worker)[0])
    return _binary_report(f"bridge-angle m={m}", hits, samples, Fraction(1, m), seed)


def estimate_angle_B(
    m: int, samples: int, seed: int, shards: int = 1, threads: int = 1
) -> SimReport:
    """Frequency of a Gaussian walk staying nonpositive vs C(2m,m)/4^m."""
    if m < 1:
        raise ValueError("m must be >= 1")

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        walks = np.cumsum(rng.standard_normal((count, m)), axis=1)
        hits = int(np.all(walks <= 0.0, axis=1).sum())
        return np.array([hits], dtype=np.int64)

    hits = int(run_sharded(samples, seed, shards, threads, worker)[0])
    exact = Fraction(math.comb(2 * m, m), 4**m)
    return _binary_report(f"walk-angle m={m}", hits, samples, exact, seed)


@dataclass(frozen=True)
class AngleEstimate:
    value: float
    std_error: float
    n_samples: int
    seed: int


def estimate_internal_angle(
    descriptor: AngleDescriptor,
    samples: int,
    seed: int,
    shards: int = 1,
    threads: int = 1,
) -> AngleEstimate:
    """Monte Carlo frequency of the ordered Gaussian chain event.

    The event is xi_1/sqrt(i_1) >= ... >= xi_k/sqrt(i_k), with a final
    >= 0 for family B.  A vacuous chain is exact: estimate 1, zero
    standard error, no sampling.
    """
    if descriptor.chain_length == 0:
        return AngleEstimate(1.0, 0.0, 0, seed)
    scale = 1.0 / np.sqrt(np.array(descriptor.sizes, dtype=np.float64))
    k = len(descriptor.sizes)
    want_tail = descriptor.family == "B"

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        ratios = rng.standard_normal((count, k)) * scale
        ok = np.ones(count, dtype=bool)
        if k > 1:
            ok &= np.all(ratios[:, :-1] >= ratios[:, 1:], axis=1)
        if want_tail:
            ok &= ratios[:, -1] >= 0.0
        return np.array([int(ok.sum())], dtype=np.int64)

    hits = int(run_sharded(samples, seed, shards, threads, worker)[0])
    p = hits / samples
    return AngleEstimate(p, math.sqrt(p * (1.0 - p) / samples), samples, seed)


# ---------------------------------------------------------------------------
# Concave majorant of a Gaussian walk
# ---------------------------------------------------------------------------

def _upper_hull(ys) -> list[int]:
    """Indices of the upper convex hull of the points (i, ys[i]).

    Middle points on or below a chord are dropped, so consecutive hull
    edges have strictly decreasing slopes and each edge is one linearity
    segment of the least concave majorant.
    """
    hull = [0]
    for i in range(1, len(ys)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a - o) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (i - o)
            if cross >= -_HULL_TOL:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def majorant_segment_law(
    n: int, trials: int, seed: int, shards: int = 1, threads: int = 1
) -> SimReport:
    """Histogram of linearity-segment counts of Gaussian-walk majorants.

    A walk S_0 = 0, S_k = g_1 + ... + g_k is simulated per trial; the
    least concave majorant on [0, n] is the upper hull of its graph and
    the outcome is its number of edges.  Exact law: Stirling-first row n
    over n!.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        counts = np.zeros(n + 1, dtype=np.int64)
        walks = np.zeros((count, n + 1))
        np.cumsum(rng.standard_normal((count, n)), axis=1, out=walks[:, 1:])
        for row in walks:
            counts[len(_upper_hull(row)) - 1] += 1
        return counts

    counts = run_sharded(trials, seed, shards, threads, worker)
    outcomes = {k: int(c) for k, c in enumerate(counts)}
    law = {k: v for k, v in enumerate(intrinsic_volume_row("A", n).values)}
    return z_test(f"majorant-segments n={n}", outcomes, law, trials, seed)


# ---------------------------------------------------------------------------
# Signed permutations and their even-cycle statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedPermutation:
    """Permutation of {0..n-1} with a sign per position."""

    sigma: tuple[int, ...]
    eps: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError("sigma must be a permutation of 0..n-1")
        if len(self.eps) != len(self.sigma) or any(e not in (-1, 1) for e in self.eps):
            raise ValueError("eps must be a +-1 vector matching sigma")

    def even_cycle_count(self) -> int:
        """Cycles whose sign product is +1."""
        n = len(self.sigma)
        seen = [False] * n
        count = 0
        for i in range(n):
            if seen[i]:
                continue
            prod = 1
            j = i
            while not seen[j]:
                seen[j] = True
                prod *= self.eps[j]
                j = self.sigma[j]
            if prod == 1:
                count += 1
        return count


def _iter_signed(n: int) -> Iterator[SignedPermutation]:
    for sigma in permutations(range(n)):
        for eps in product((1, -1), repeat=n):
            yield SignedPermutation(sigma, eps)


def even_cycle_law_exhaustive(kind: str, n: int) -> SimReport:
    """Even-cycle histogram over the whole group, matched exactly.

    Enumerates all 2^n n! signed permutations (kind "signed") or the
    2^(n-1) n! ones with positive total sign (kind "dperm"); the count
    with k even cycles must equal the corresponding triangle entry.
    """
    if kind not in ("signed", "dperm"):
        raise ValueError(f"unknown kind {kind!r}")
    if not 1 <= n <= 5:
        raise ValueError("exhaustive enumeration supports 1 <= n <= 5")
    counts = [0] * (n + 1)
    total = 0
    for sp in _iter_signed(n):
        if kind == "dperm" and math.prod(sp.eps) != 1:
            continue
        counts[sp.even_cycle_count()] += 1
        total += 1

    family = "B" if kind == "signed" else "D"
    expected = triangle(family, n).row(n)
    law = {k: Fraction(e, row_sum_law(family, n)) for k, e in enumerate(expected)}
    z = {str(k): (0.0 if counts[k] == expected[k] else math.inf) for k in range(n + 1)}
    return SimReport(
        f"even-cycles-exhaustive {kind} n={n}",
        {k: c for k, c in enumerate(counts)},
        total,
        law,
        z,
        all(counts[k] == expected[k] for k in range(n + 1)),
        seed=0,
    )


def even_cycle_law(
    kind: str, n: int, trials: int, seed: int, shards: int = 1, threads: int = 1
) -> SimReport:
    """Sampled even-cycle histogram of uniform (signed | D) permutations.

    D-permutations are drawn by flipping the last sign of a uniform
    signed permutation when its total sign is negative; the map is
    two-to-one onto the positive-sign subgroup, hence uniform.
    """
    if kind not in ("signed", "dperm"):
        raise ValueError(f"unknown kind {kind!r}")
    if n < 1:
        raise ValueError("n must be >= 1")

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        counts = np.zeros(n + 1, dtype=np.int64)
        sigmas = np.argsort(rng.random((count, n)), axis=1)
        eps = rng.integers(0, 2, size=(count, n)) * 2 - 1
        if kind == "dperm":
            bad = np.prod(eps, axis=1) == -1
            eps[bad, -1] *= -1
        for sigma, signs in zip(sigmas, eps):
            sp = SignedPermutation(tuple(int(v) for v in sigma), tuple(int(e) for e in signs))
            counts[sp.even_cycle_count()] += 1
        return counts

    counts = run_sharded(trials, seed, shards, threads, worker)
    family = "B" if kind == "signed" else "D"
    law = {k: v for k, v in enumerate(intrinsic_volume_row(family, n).values)}
    outcomes = {k: int(c) for k, c in enumerate(counts)}
    return z_test(f"even-cycles {kind} n={n}", outcomes, law, trials, seed)


# ---------------------------------------------------------------------------
# Bernoulli-sum laws
# ---------------------------------------------------------------------------

def _bernoulli_params(kind: str, n: int) -> list[Fraction]:
    if kind == "A":
        return [Fraction(1, j) for j in range(1, n + 1)]
    if kind == "B":
        return [Fraction(1, 2 * j) for j in range(1, n + 1)]
    if kind == "D":
        return [Fraction(1, 2 * j) for j in range(1, n)] + [Fraction(1, n)]
    raise ValueError(f"unknown kind {kind!r}")


def bernoulli_sum_law(
    kind: str, n: int, trials: int, seed: int, shards: int = 1, threads: int = 1
) -> SimReport:
    """Histogram of a sum of independent Bernoulli indicators vs its row law.

    Success probabilities: 1/j (kind A), 1/(2j) (kind B), and for kind D
    1/(2j) for j < n with a final 1/n term.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    probs = np.array([float(p) for p in _bernoulli_params(kind, n)])

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        draws = rng.random((count, n)) < probs
        return np.bincount(draws.sum(axis=1), minlength=n + 1).astype(np.int64)

    counts = run_sharded(trials, seed, shards, threads, worker)
    law = {k: v for k, v in enumerate(intrinsic_volume_row(kind, n).values)}
    outcomes = {k: int(c) for k, c in enumerate(counts)}
    return z_test(f"bernoulli-sum {kind} n={n}", outcomes, law, trials, seed)
