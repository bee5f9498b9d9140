"""Face combinatorics and angles of the order cones.

The three chamber families in R^n:

* A: beta_1 >= beta_2 >= ... >= beta_n
* B: beta_1 >= beta_2 >= ... >= beta_n >= 0
* D: beta_1 >= ... >= beta_{n-1} >= |beta_n|   (n >= 2)

A k-face of an A chamber is indexed by the positions l_1 < ... < l_{k-1}
in {1..n-1} where the chain inequality stays strict; everything between
consecutive positions is forced equal.  A k-face of a B chamber is
indexed by l_1 < ... < l_k in {1..n}, the coordinates after l_k being
pinned to zero.  The normal cone of a face factors as an orthogonal
product of "bridge" blocks (walks returning to zero, solid angle 1/m)
and, for family B, one final "walk" block (walks staying nonpositive,
solid angle C(2m,m)/4^m), which makes external angles exact rationals.

Face enumeration and external angles are not provided for family D:
the D volume table is obtained from the B table instead, and D points
are handled by the projection module through the two B-type halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

FAMILIES = ("A", "B", "D")

_D_UNSUPPORTED = "face lattice not implemented for D"


@dataclass(frozen=True)
class Chamber:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.family == "D" and self.n < 2:
            raise ValueError("family D needs n >= 2")


@dataclass(frozen=True)
class FaceIndex:
    """One face of an A or B chamber, as its strict-inequality positions."""

    family: str
    n: int
    ls: tuple[int, ...]

    def __post_init__(self):
        if self.family == "D":
            raise ValueError(_D_UNSUPPORTED)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        upper = self.n - 1 if self.family == "A" else self.n
        prev = 0
        for l in self.ls:
            if not prev < l <= upper:
                raise ValueError(f"face indices out of range: {self.ls}")
            prev = l

    @property
    def dim(self) -> int:
        return len(self.ls) + 1 if self.family == "A" else len(self.ls)

    def gaps(self) -> tuple[int, ...]:
        """Consecutive index gaps; the block sizes of the face's span.

        For A the trailing gap runs to n; for B the trailing zero range
        n - l_k is not part of the span and is not included here.
        """
        bounds = (0,) + self.ls + ((self.n,) if self.family == "A" else ())
        return tuple(b - a for a, b in zip(bounds, bounds[1:]))


def enumerate_faces(chamber: Chamber, k: int) -> list[FaceIndex]:
    """All k-faces, lexicographically by index tuple.

    Counts: C(n-1, k-1) for family A with k >= 1 (none for k = 0),
    C(n, k) for family B.
    """
    if chamber.family == "D":
        raise ValueError(_D_UNSUPPORTED)
    if not 0 <= k <= chamber.n:
        raise ValueError(f"k={k} outside 0..{chamber.n}")
    n = chamber.n
    if chamber.family == "A":
        if k == 0:
            return []
        pool = range(1, n)
        size = k - 1
    else:
        pool = range(1, n + 1)
        size = k
    return [FaceIndex(chamber.family, n, ls) for ls in combinations(pool, size)]


@dataclass(frozen=True)
class Block:
    """One orthogonal factor of a normal cone: kind "D" or "B", size m."""

    kind: str
    m: int

    def solid_angle(self) -> Fraction:
        if self.kind == "D":
            return Fraction(1, self.m)
        if self.m == 0:
            return Fraction(1)
        return Fraction(math.comb(2 * self.m, self.m), 4**self.m)


def normal_block_decomposition(face: FaceIndex) -> tuple[Block, ...]:
    """Orthogonal block factorization of the face's normal cone.

    A face (l_1..l_{k-1}) -> D(l_1) x D(l_2-l_1) x ... x D(n-l_{k-1});
    B face (l_1..l_k) -> D(l_1) x ... x D(l_k-l_{k-1}) x B(n-l_k).
    """
    if face.family == "A":
        return tuple(Block("D", g) for g in face.gaps())
    last = face.ls[-1] if face.ls else 0
    blocks = tuple(Block("D", g) for g in face.gaps())
    return blocks + (Block("B", face.n - last),)


def external_angle_exact(face: FaceIndex) -> Fraction:
    """Solid angle of the normal cone, as an exact rational.

    Product over blocks of 1/m for a D block and C(2m,m)/4^m for the
    B block (1 when m = 0).
    """
    angle = Fraction(1)
    for block in normal_block_decomposition(face):
        angle *= block.solid_angle()
    return angle


@dataclass(frozen=True)
class AngleDescriptor:
    """Orthant-probability form of a face's internal angle.

    The angle equals P(xi_1/sqrt(i_1) >= ... >= xi_k/sqrt(i_k)) over iid
    standard Gaussians, with a trailing ">= 0" for family B.  ``sizes``
    are the face's block sizes i_1..i_k.
    """

    family: str
    sizes: tuple[int, ...]

    @property
    def chain_length(self) -> int:
        """Number of inequality constraints in the Gaussian chain event."""
        if self.family == "A":
            return max(len(self.sizes) - 1, 0)
        return len(self.sizes)


def internal_angle_spec(face: FaceIndex) -> AngleDescriptor:
    """Probabilistic description of the internal angle at a face."""
    return AngleDescriptor(face.family, face.gaps())


def internal_angle_closed_form(desc: AngleDescriptor) -> float | None:
    """Exact internal angle where geometry is cheap; None otherwise.

    Covered: vacuous chains (angle 1), a single constraint (angle 1/2),
    and the planar B wedge P(xi_1/sqrt(a) >= xi_2/sqrt(b) >= 0) =
    arctan(sqrt(b/a)) / (2 pi).  Longer chains have no elementary form
    and are left to Monte Carlo.
    """
    if desc.chain_length == 0:
        return 1.0
    if desc.chain_length == 1:
        return 0.5
    if desc.family == "B" and len(desc.sizes) == 2:
        a, b = desc.sizes
        return math.atan(math.sqrt(b / a)) / (2.0 * math.pi)
    return None


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    std_error: float


def reconstruct_volume(
    chamber: Chamber,
    k: int,
    internal_angles: Mapping[FaceIndex, tuple[float, float]],
) -> VolumeEstimate:
    """Assemble v_k as sum over k-faces of external x internal angle.

    ``internal_angles`` maps every k-face to (estimate, standard error).
    External angles are exact, so the propagated standard error is
    sqrt(sum (ext * se)^2), treating the per-face estimates as
    independent.
    """
    total = 0.0
    variance = 0.0
    for face in enumerate_faces(chamber, k):
        if face not in internal_angles:
            raise ValueError(f"missing internal angle for face {face.ls}")
        estimate, se = internal_angles[face]
        ext = float(external_angle_exact(face))
        total += ext * estimate
        variance += (ext * se) ** 2
    return VolumeEstimate(total, math.sqrt(variance))


def dual_cone_description(chamber: Chamber) -> tuple[tuple[int, str], ...]:
    """Partial-sum constraints defining the polar cone.

    Each entry (j, rel) constrains x_1 + ... + x_j: rel is "le" for
    <= 0 and "eq" for = 0.  Family A: prefixes 1..n-1 are <= 0 and the
    full sum vanishes; family B: all prefixes 1..n are <= 0.
    """
    if chamber.family == "D":
        raise ValueError(_D_UNSUPPORTED)
    n = chamber.n
    if chamber.family == "A":
        return tuple((j, "le") for j in range(1, n)) + ((n, "eq"),)
    return tuple((j, "le") for j in range(1, n + 1))
