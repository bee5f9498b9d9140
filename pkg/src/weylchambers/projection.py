"""Euclidean projection onto the chambers with face identification.

The A projection is isotonic regression: pool-adjacent-violators (PAVA)
fits the best non-increasing vector, and the pooled blocks name the face
whose relative interior holds the result.  The B projection clamps the
isotonic fit at zero, merging the clamped tail into a single zero block.
The D chamber is the union of two isometric B-type pieces (last
coordinate nonnegative or nonpositive), so its projection is the nearer
of the two B sub-projections with the sign of the last coordinate
restored.

Face dimensions are read off the combinatorial state of the algorithm,
never from comparing fitted floats: A counts blocks, B counts blocks
with positive pooled value, and D applies the B count to the winning
half, adding one when the clamped tail is a lone last coordinate (the
zero there pins nothing, because only |beta_n| is constrained).

A brute-force oracle solves the equality-constrained least squares onto
every candidate constraint subset and keeps the feasible minimizer; it
shares no code with the fast path and is the ground truth in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .chambers import Chamber
from .streams import run_sharded

TOL = 1e-9


class PavaBlock(NamedTuple):
    start: int
    length: int
    value: float


def pava_decreasing(
    x: Sequence[float], weights: Sequence[float] | None = None
) -> list[PavaBlock]:
    """Weighted isotonic regression onto non-increasing vectors.

    Returns the pooled blocks in order; pooled values strictly decrease
    across blocks (exact ties are pooled).  Within a block the fitted
    value is the weighted mean.  Unit weights when ``weights`` is None.
    """
    xs = [float(v) for v in x]
    n = len(xs)
    if n == 0:
        raise ValueError("empty input")
    if weights is None:
        ws = [1.0] * n
    else:
        ws = [float(w) for w in weights]
        if len(ws) != n:
            raise ValueError("weights length mismatch")
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be positive")

    pw = [0.0] * (n + 1)
    pwx = [0.0] * (n + 1)
    for i in range(n):
        pw[i + 1] = pw[i] + ws[i]
        pwx[i + 1] = pwx[i] + ws[i] * xs[i]

    def mean(s: int, e: int) -> float:
        return (pwx[e] - pwx[s]) / (pw[e] - pw[s])

    starts = []  # stack of block start indices
    for i in range(n):
        starts.append(i)
        # merge while the new rightmost block does not sit strictly below
        while len(starts) >= 2 and mean(starts[-2], starts[-1]) <= mean(
            starts[-1], i + 1
        ):
            starts.pop()
    ends = starts[1:] + [n]
    return [PavaBlock(s, e - s, mean(s, e)) for s, e in zip(starts, ends)]


@dataclass(frozen=True)
class ProjectionResult:
    """Projection of a point with the face holding it.

    ``blocks`` are (length, pooled value) pairs covering all n
    coordinates.  For family D they describe the winning nonnegative
    half; the point itself carries the restored sign of the last
    coordinate.
    """

    family: str
    point: np.ndarray
    face_dim: int
    blocks: tuple[tuple[int, float], ...]


def _check_input(chamber: Chamber, x: Sequence[float]) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != chamber.n:
        raise ValueError(f"expected a vector of length {chamber.n}")
    if not np.all(np.isfinite(v)):
        raise ValueError("input must be finite")
    return v


def _project_b_blocks(x: Sequence[float]) -> tuple[list[PavaBlock], int]:
    """Clamped isotonic fit; returns positive blocks and clamped length."""
    blocks = pava_decreasing(x)
    positive = [b for b in blocks if b.value > 0.0]
    clamped = sum(b.length for b in blocks) - sum(b.length for b in positive)
    return positive, clamped


def _expand(blocks: list[PavaBlock], n: int, pad_zero: bool) -> np.ndarray:
    out = np.zeros(n)
    for b in blocks:
        out[b.start : b.start + b.length] = b.value
    if not pad_zero:
        assert sum(b.length for b in blocks) == n
    return out


def project(chamber: Chamber, x: Sequence[float]) -> ProjectionResult:
    """Euclidean projection onto the chamber, with its face identified."""
    v = _check_input(chamber, x)
    n = chamber.n

    if chamber.family == "A":
        blocks = pava_decreasing(v)
        point = _expand(blocks, n, pad_zero=False)
        return ProjectionResult(
            "A", point, len(blocks), tuple((b.length, b.value) for b in blocks)
        )

    if chamber.family == "B":
        positive, clamped = _project_b_blocks(v)
        point = _expand(positive, n, pad_zero=True)
        blocks = [(b.length, b.value) for b in positive]
        if clamped:
            blocks.append((clamped, 0.0))
        return ProjectionResult("B", point, len(positive), tuple(blocks))

    # Family D: the chamber is the union of the two B-type halves, so
    # project onto both and keep the nearer candidate.
    flipped = v.copy()
    flipped[-1] = -flipped[-1]
    cands = []
    for w, sign in ((v, 1.0), (flipped, -1.0)):
        positive, clamped = _project_b_blocks(w)
        point = _expand(positive, n, pad_zero=True)
        point[-1] *= sign
        dist = float(np.sum((v - point) ** 2))
        cands.append((dist, point, positive, clamped))
    d1, d2 = cands[0][0], cands[1][0]
    if d1 == d2:
        # equidistant halves force beta_n = 0, where both agree
        assert np.allclose(cands[0][1], cands[1][1], atol=TOL)
    dist, point, positive, clamped = cands[0] if d1 <= d2 else cands[1]
    blocks = [(b.length, b.value) for b in positive]
    if clamped:
        blocks.append((clamped, 0.0))
    face_dim = len(positive) + (1 if clamped == 1 else 0)
    return ProjectionResult("D", point, face_dim, tuple(blocks))


# ---------------------------------------------------------------------------
# Optimality certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Max violations of the three projection optimality conditions."""

    feasibility_gap: float
    dual_gap: float
    orthogonality_gap: float

    def ok(self, tol: float = TOL) -> bool:
        return max(self.feasibility_gap, self.dual_gap, self.orthogonality_gap) <= tol


def chamber_membership_gap(chamber: Chamber, point: np.ndarray) -> float:
    """Largest violation of the chamber's defining inequalities (0 if inside)."""
    p = np.asarray(point, dtype=np.float64)
    gaps = [0.0]
    if chamber.family == "D":
        gaps.extend(p[i + 1] - p[i] for i in range(chamber.n - 2))
        gaps.append(abs(p[-1]) - p[-2])
    else:
        gaps.extend(p[i + 1] - p[i] for i in range(chamber.n - 1))
        if chamber.family == "B":
            gaps.append(-p[-1])
    return max(gaps)


def dual_membership_gap(chamber: Chamber, r: np.ndarray) -> float:
    """Largest violation of the polar-cone constraints by a residual.

    A: prefix sums <= 0 and total = 0; B: all prefix sums <= 0; D: the
    polar is the intersection of the polars of the two halves, so the
    first n-1 prefixes are <= 0 together with prefix(n-1) + |r_n| <= 0.
    """
    p = np.cumsum(np.asarray(r, dtype=np.float64))
    n = chamber.n
    if chamber.family == "A":
        head = float(np.max(p[: n - 1], initial=0.0))
        return max(head, abs(float(p[-1])))
    if chamber.family == "B":
        return max(float(np.max(p)), 0.0)
    head = float(np.max(p[: n - 1], initial=0.0))
    return max(head, float(p[n - 2] + abs(r[-1])))


def certificate(chamber: Chamber, x: Sequence[float], result: ProjectionResult) -> Certificate:
    v = _check_input(chamber, x)
    r = v - result.point
    ortho = abs(float(np.dot(r, result.point)))
    return Certificate(
        chamber_membership_gap(chamber, result.point),
        dual_membership_gap(chamber, r),
        ortho,
    )


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

BRUTEFORCE_MAX_N = 10


@lru_cache(maxsize=None)
def _constraint_rows(family: str, n: int) -> np.ndarray:
    """Rows a_i with the chamber equal to {x : a_i . x >= 0 for all i}."""
    rows = []
    chain = n - 1 if family != "D" else n - 2
    for i in range(chain):
        a = np.zeros(n)
        a[i], a[i + 1] = 1.0, -1.0
        rows.append(a)
    if family == "B":
        a = np.zeros(n)
        a[-1] = 1.0
        rows.append(a)
    elif family == "D":
        for s in (-1.0, 1.0):
            a = np.zeros(n)
            a[-2], a[-1] = 1.0, s
            rows.append(a)
    return np.array(rows)


@lru_cache(maxsize=None)
def _subset_projectors(family: str, n: int) -> list[np.ndarray]:
    """Orthogonal projectors onto {x : a_i . x = 0, i in S} for all S."""
    rows = _constraint_rows(family, n)
    m = len(rows)
    eye = np.eye(n)
    projectors = []
    for mask in range(2**m):
        idx = [i for i in range(m) if mask >> i & 1]
        if not idx:
            projectors.append(eye)
            continue
        a = rows[idx]
        gram = a @ a.T
        projectors.append(eye - a.T @ np.linalg.solve(gram, a))
    return projectors


def project_bruteforce(chamber: Chamber, x: Sequence[float]) -> ProjectionResult:
    """Projection by exhaustive search over constraint subsets.

    Every subset of defining constraints is turned into equalities, the
    input is projected onto that subspace, infeasible candidates are
    dropped, and the nearest survivor wins.  The face dimension is
    n minus the number of constraints tight at the winner (tight sets
    of these chambers are always linearly independent).
    """
    if chamber.n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTEFORCE_MAX_N}")
    v = _check_input(chamber, x)
    rows = _constraint_rows(chamber.family, chamber.n)

    best = None
    best_dist = math.inf
    for proj in _subset_projectors(chamber.family, chamber.n):
        cand = proj @ v
        if np.min(rows @ cand, initial=0.0) < -TOL:
            continue
        dist = float(np.sum((v - cand) ** 2))
        if dist < best_dist:
            best_dist = dist
            best = cand
    assert best is not None  # the full-equality subset is always feasible

    tight = int(np.sum(np.abs(rows @ best) <= TOL))
    face_dim = chamber.n - tight
    blocks = _blocks_from_point(chamber, best)
    return ProjectionResult(chamber.family, best, face_dim, blocks)


def _blocks_from_point(chamber: Chamber, point: np.ndarray) -> tuple[tuple[int, float], ...]:
    """Recover (length, value) runs of a chamber point (tolerance runs)."""
    vals = np.abs(point) if chamber.family == "D" else point
    blocks = []
    start = 0
    for i in range(1, chamber.n):
        if abs(vals[i] - vals[start]) > TOL:
            blocks.append((i - start, float(np.mean(vals[start:i]))))
            start = i
    blocks.append((chamber.n - start, float(np.mean(vals[start:]))))
    return tuple(blocks)


# ---------------------------------------------------------------------------
# Batched histogram
# ---------------------------------------------------------------------------

_BATCH_CHUNK = 250_000


def _pava_batch(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lockstep non-increasing PAVA over the rows of ``x``.

    Returns (mu, start): per-position pooled means and block-start
    flags.  Each round merges every adjacent block pair that is not
    strictly decreasing; stale-mean merges are safe because a violating
    chain stays violating as it collapses left to right.
    """
    rows, n = x.shape
    prefix = np.zeros((rows, n + 1))
    np.cumsum(x, axis=1, out=prefix[:, 1:])
    idx = np.arange(n)
    start = np.ones((rows, n), dtype=bool)

    for _ in range(n):
        lead = np.maximum.accumulate(np.where(start, idx, 0), axis=1)
        spos = np.where(start, idx, n)
        nxt = np.empty_like(spos)
        nxt[:, -1] = n
        if n > 1:
            nxt[:, :-1] = np.minimum.accumulate(spos[:, :0:-1], axis=1)[:, ::-1]
        hi = np.take_along_axis(prefix, nxt, axis=1)
        lo = np.take_along_axis(prefix, lead, axis=1)
        mu = (hi - lo) / (nxt - lead)
        if n == 1:
            return mu, start
        viol = start[:, 1:] & (mu[:, :-1] <= mu[:, 1:])
        if not viol.any():
            return mu, start
        start[:, 1:] &= ~viol
    raise AssertionError("PAVA failed to converge")


def _face_dims_batch(family: str, x: np.ndarray) -> np.ndarray:
    """Face dimension of the projection of every row of ``x``."""
    if family == "A":
        _, start = _pava_batch(x)
        return start.sum(axis=1)
    if family == "B":
        mu, start = _pava_batch(x)
        return (start & (mu > 0.0)).sum(axis=1)

    flipped = x.copy()
    flipped[:, -1] = -flipped[:, -1]
    stats = []
    for w in (x, flipped):
        mu, start = _pava_batch(w)
        fitted = np.maximum(mu, 0.0)
        dist = np.sum((w - fitted) ** 2, axis=1)
        j = (start & (mu > 0.0)).sum(axis=1)
        z = (mu <= 0.0).sum(axis=1)
        stats.append((dist, j, z))
    first = stats[0][0] <= stats[1][0]
    j = np.where(first, stats[0][1], stats[1][1])
    z = np.where(first, stats[0][2], stats[1][2])
    return j + (z == 1)


def face_dimension_histogram(
    chamber: Chamber,
    samples: int,
    seed: int,
    shards: int = 1,
    threads: int = 1,
) -> np.ndarray:
    """Tally the face dimension of projected standard Gaussian samples.

    Returns counts indexed by k = 0..n.  Deterministic for a fixed
    (seed, shards) pair; shard streams are derived from (seed, shard
    index) and merged by addition.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = chamber.n

    def worker(rng: np.random.Generator, count: int) -> np.ndarray:
        counts = np.zeros(n + 1, dtype=np.int64)
        left = count
        while left > 0:
            chunk = min(left, _BATCH_CHUNK)
            dims = _face_dims_batch(chamber.family, rng.standard_normal((chunk, n)))
            counts += np.bincount(dims, minlength=n + 1)
            left -= chunk
        return counts

    return run_sharded(samples, seed, shards, threads, worker)
