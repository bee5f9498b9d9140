"""Exact integer triangles behind the chamber volume tables.

Three triangular arrays are computed in arbitrary-precision integer
arithmetic, indexed by the chamber family they serve:

* kind "A": unsigned Stirling numbers of the first kind, the coefficients
  of t(t+1)...(t+n-1).  Row sum n!.
* kind "B": coefficients of (t+1)(t+3)...(t+2n-1).  Row sum 2^n n!.
* kind "D": coefficients of (t+1)(t+3)...(t+2n-3)(t+n-1).  Row sum
  2^(n-1) n! for n >= 1.

Production rows come from the two-term recurrences; the polynomial
expansions are kept as an independent route and the two are compared
entrywise in tests.  Dividing row n by its row sum yields the exact
conic intrinsic volume table of the matching chamber.

Boundary conventions: row 0 is [1] for every kind.  The "D" value for
n = 0 is not forced by the defining product; we set D[0,0] = 1 so that
the B/D conversion identities extend to n = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

TRIANGLE_KINDS = ("A", "B", "D")
IDENTITY_NAMES = (
    "b_from_stirling",
    "b_catalan_sum",
    "stirling_composition_sum",
    "d_from_b_both_forms",
    "rising_factorial_gf",
)

# Exhaustive composition enumeration stops here; above it the check is
# reported as skipped (the composition count doubles with every n).
COMPOSITION_LIMIT = 20


@dataclass(frozen=True)
class IntegerPolynomial:
    """Dense integer polynomial; coefficients[k] multiplies t^k."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) > 1 and self.coefficients[-1] == 0:
            raise ValueError("highest-degree coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> int:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return 0

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc


def _multiply_linear(coeffs: list[int], constant: int) -> list[int]:
    """Multiply a coefficient list by the factor (t + constant) in place."""
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += c * constant
        out[i + 1] += c
    return out


def _linear_constants(kind: str, n: int) -> list[int]:
    """Constants c_j of the defining product prod_j (t + c_j) for row n."""
    if kind == "A":
        return list(range(n))
    if kind == "B":
        return [2 * j + 1 for j in range(n)]
    if kind == "D":
        if n == 0:
            return []
        return [2 * j + 1 for j in range(n - 1)] + [n - 1]
    raise ValueError(f"unknown triangle kind {kind!r}")


def expand_defining_polynomial(kind: str, n: int) -> IntegerPolynomial:
    """Expand the degree-n defining product of a triangle row.

    The coefficient of t^k in the result is the (n, k) entry of the
    triangle.  Row 0 is the empty product, the constant polynomial 1
    (for kind "D" this is the documented convention).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    coeffs = [1]
    for c in _linear_constants(kind, n):
        coeffs = _multiply_linear(coeffs, c)
    return IntegerPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class IntegerTriangle:
    """Rows 0..n_max of one triangle; rows[n][k] defined for 0 <= k <= n."""

    kind: str
    rows: tuple[tuple[int, ...], ...]

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def value(self, n: int, k: int) -> int:
        """Entry (n, k); indices outside 0..n give 0."""
        if n < 0 or n > self.n_max:
            raise ValueError(f"row {n} not built (n_max={self.n_max})")
        if k < 0 or k > n:
            return 0
        return self.rows[n][k]

    def row(self, n: int) -> tuple[int, ...]:
        return self.rows[n]


def triangle(kind: str, n_max: int) -> IntegerTriangle:
    """Build rows 0..n_max of a triangle by its two-term recurrence.

    "A": s(n,k) = (n-1) s(n-1,k) + s(n-1,k-1)
    "B": B[n,k] = (2n-1) B[n-1,k] + B[n-1,k-1]
    "D": D[n,k] = (n-1) B[n-1,k] + B[n-1,k-1]   (rows derived from "B")
    """
    if kind not in TRIANGLE_KINDS:
        raise ValueError(f"unknown triangle kind {kind!r}")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")

    if kind == "D":
        b = triangle("B", max(n_max - 1, 0))
        rows: list[tuple[int, ...]] = [(1,)]
        for n in range(1, n_max + 1):
            prev = b.rows[n - 1]
            row = [0] * (n + 1)
            for k in range(n + 1):
                term = (n - 1) * prev[k] if k <= n - 1 else 0
                if k >= 1 and k - 1 <= n - 1:
                    term += prev[k - 1]
                row[k] = term
            rows.append(tuple(row))
        return IntegerTriangle("D", tuple(rows))

    mult = (lambda n: n - 1) if kind == "A" else (lambda n: 2 * n - 1)
    rows = [(1,)]
    for n in range(1, n_max + 1):
        prev = rows[n - 1]
        m = mult(n)
        row = [0] * (n + 1)
        for k in range(n + 1):
            term = m * prev[k] if k <= n - 1 else 0
            if k >= 1:
                term += prev[k - 1]
            row[k] = term
        rows.append(tuple(row))
    return IntegerTriangle(kind, tuple(rows))


def row_sum_law(kind: str, n: int) -> int:
    """Exact row sum: n!, 2^n n!, or 2^(n-1) n! (1 for the D row 0)."""
    if kind == "A":
        return math.factorial(n)
    if kind == "B":
        return 2**n * math.factorial(n)
    if kind == "D":
        return 1 if n == 0 else 2 ** (n - 1) * math.factorial(n)
    raise ValueError(f"unknown triangle kind {kind!r}")


@dataclass(frozen=True)
class VolumeRow:
    """Exact conic intrinsic volumes of one chamber, indexed by face dim."""

    family: str
    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.values) != 1:
            raise ValueError("volume row must sum to 1 exactly")


def intrinsic_volume_row(family: str, n: int) -> VolumeRow:
    """Exact intrinsic volumes v_0..v_n of the family's chamber in R^n.

    v_k is triangle entry (n, k) divided by the row-sum law: s(n,k)/n!
    for family A, B[n,k]/(2^n n!) for B, D[n,k]/(2^(n-1) n!) for D.
    """
    if family not in TRIANGLE_KINDS:
        raise ValueError(f"unknown family {family!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    row = triangle(family, n).row(n)
    denom = row_sum_law(family, n)
    return VolumeRow(family, n, tuple(Fraction(v, denom) for v in row))


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    """Outcome of one exact identity check over all 0 <= k <= n <= n_max."""

    name: str
    n_max: int
    failures: list[tuple[int, int]]
    skipped: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def _check_b_from_stirling(n_max: int) -> list[tuple[int, int]]:
    # B[n,k] = sum_{i=k}^n 2^(n-i) C(i,k) s(n,i)
    s = triangle("A", n_max)
    b = triangle("B", n_max)
    failures = []
    for n in range(n_max + 1):
        for k in range(n + 1):
            total = sum(
                2 ** (n - i) * math.comb(i, k) * s.value(n, i)
                for i in range(k, n + 1)
            )
            if total != b.value(n, k):
                failures.append((n, k))
    return failures


def _check_b_catalan_sum(n_max: int) -> list[tuple[int, int]]:
    # B[n,k] = sum_{r=0}^{n-k} 2^(n-k-2r) C(2r,r) s(n-r,k) n!/(n-r)!
    # The exponent n-k-2r goes negative for large r, so both sides are
    # scaled by 2^(n-k) to keep the comparison in integers.
    s = triangle("A", n_max)
    b = triangle("B", n_max)
    failures = []
    for n in range(n_max + 1):
        falling = 1  # n!/(n-r)! updated incrementally over r
        terms = []
        for r in range(n + 1):
            terms.append(math.comb(2 * r, r) * falling)
            falling *= n - r
        for k in range(n + 1):
            total = sum(
                4 ** (n - k - r) * terms[r] * s.value(n - r, k)
                for r in range(n - k + 1)
            )
            if total != b.value(n, k) * 2 ** (n - k):
                failures.append((n, k))
    return failures


def _check_stirling_composition_sum(n_max: int) -> tuple[list, list]:
    # s(n,k) = (n!/k!) * sum over compositions i_1+...+i_k = n of
    # 1/(i_1 ... i_k).  Each product divides n!, so the sum over
    # compositions of n!/(i_1 ... i_k) is an integer, equal to k! s(n,k).
    s = triangle("A", min(n_max, COMPOSITION_LIMIT))
    failures = []
    skipped = []
    for n in range(1, n_max + 1):
        if n > COMPOSITION_LIMIT:
            skipped.append(
                f"n={n}: composition enumeration skipped "
                f"(limit {COMPOSITION_LIMIT})"
            )
            continue
        nf = math.factorial(n)
        sums = [0] * (n + 1)  # sums[k] accumulates n!/(i_1...i_k)
        for k in range(1, n + 1):
            for cuts in combinations(range(1, n), k - 1):
                prod = 1
                prev = 0
                for c in cuts:
                    prod *= c - prev
                    prev = c
                prod *= n - prev
                sums[k] += nf // prod
        for k in range(1, n + 1):
            if sums[k] != math.factorial(k) * s.value(n, k):
                failures.append((n, k))
    return failures, skipped


def _check_d_from_b_both_forms(n_max: int) -> list[tuple[int, int]]:
    # D[n,k] = (n-1) B[n-1,k] + B[n-1,k-1]  and  D[n,k] = B[n,k] - n B[n-1,k]
    b = triangle("B", n_max)
    d = triangle("D", n_max)
    failures = []
    for n in range(1, n_max + 1):
        for k in range(n + 1):
            lhs = d.value(n, k)
            first = (n - 1) * b.value(n - 1, k) + b.value(n - 1, k - 1)
            second = b.value(n, k) - n * b.value(n - 1, k)
            if lhs != first or lhs != second:
                failures.append((n, k))
    return failures


def _check_rising_factorial_gf(n_max: int) -> list[tuple[int, int]]:
    # sum_k B[n,k] y^k = 2^n ((y+1)/2)((y+1)/2 + 1)...((y+1)/2 + n-1),
    # compared coefficientwise as polynomials in y over the rationals.
    b = triangle("B", n_max)
    failures = []
    half = Fraction(1, 2)
    coeffs: list[Fraction] = [Fraction(1)]
    for n in range(1, n_max + 1):
        constant = half + (n - 1)  # factor (y/2 + (n-1) + 1/2)
        out = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            out[i] += c * constant
            out[i + 1] += c * half
        coeffs = out
        scale = 2**n
        for k in range(n + 1):
            if coeffs[k] * scale != b.value(n, k):
                failures.append((n, k))
    return failures


def verify_identity(name: str, n_max: int) -> IdentityReport:
    """Check one named exact identity for all rows up to n_max.

    Returns a report whose ``failures`` lists every (n, k) where the two
    sides differ; ``skipped`` records rows excluded by enumeration
    limits.  All arithmetic is exact, no tolerances anywhere.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if name == "b_from_stirling":
        return IdentityReport(name, n_max, _check_b_from_stirling(n_max), [])
    if name == "b_catalan_sum":
        return IdentityReport(name, n_max, _check_b_catalan_sum(n_max), [])
    if name == "stirling_composition_sum":
        failures, skipped = _check_stirling_composition_sum(n_max)
        return IdentityReport(name, n_max, failures, skipped)
    if name == "d_from_b_both_forms":
        return IdentityReport(name, n_max, _check_d_from_b_both_forms(n_max), [])
    if name == "rising_factorial_gf":
        return IdentityReport(name, n_max, _check_rising_factorial_gf(n_max), [])
    raise ValueError(f"unknown identity {name!r}")
