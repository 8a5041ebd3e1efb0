"""Plücker coordinates, hyperplane pairings and two-row Schubert calculus on G(1, N)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Literal

from .errors import GeometryError
from .exact_algebra import RatMatrix, canonical_projective
from .projective import LinSubspace


@dataclass(frozen=True)
class PluckerCoords:
    """Canonical Plücker vector of a line in P^N, indexed by pairs i < j (0-based)."""

    N: int
    coords: tuple[int, ...]

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.N + 1), 2))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if i == j:
            return 0
        if i > j:
            return -self[j, i]
        return self.coords[self.pairs.index((i, j))]

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {ij: c for ij, c in zip(self.pairs, self.coords) if c}


def plucker(line: LinSubspace) -> PluckerCoords:
    if line.dim != 1:
        raise GeometryError("plucker coordinates need a rank-2 basis")
    p, q = line.rows
    n = line.basis.ncols
    minors = [p[i] * q[j] - p[j] * q[i] for i, j in combinations(range(n), 2)]
    return PluckerCoords(n - 1, canonical_projective(minors))


def plucker_relations(P: PluckerCoords) -> list[int]:
    """Values of p_ij p_kl - p_ik p_jl + p_il p_jk over all i<j<k<l."""
    return [
        P[i, j] * P[k, l] - P[i, k] * P[j, l] + P[i, l] * P[j, k]
        for i, j, k, l in combinations(range(P.N + 1), 4)
    ]


def bilinear(p, M: RatMatrix, q) -> Fraction:
    """p M q^T for row vectors p, q."""
    return sum((a * b for a, b in zip(M.vecmul(p), q)), Fraction(0))


def hyperplane_pairing(line: LinSubspace, M: RatMatrix) -> Fraction:
    """p M q^T for the canonical basis (p, q); zero iff [line] lies on the hyperplane P(M)*."""
    if not M.is_antisymmetric():
        raise GeometryError("pairing requires an antisymmetric matrix")
    if M.nrows != line.basis.ncols:
        raise GeometryError("ambient mismatch")
    if line.dim != 1:
        raise GeometryError("not a line")
    p, q = line.rows
    return bilinear(p, M, q)


# ---------------------------------------------------------------------------
# Schubert calculus


@dataclass(frozen=True, order=True)
class TwoRowPartition:
    """Schubert class sigma_{a,b} of G(1, N)."""

    a: int
    b: int
    N: int

    def __post_init__(self):
        if not (self.N - 1 >= self.a >= self.b >= 0):
            raise ValueError(f"invalid partition ({self.a},{self.b}) for G(1,{self.N})")

    @property
    def codim(self) -> int:
        return self.a + self.b

    def dual(self) -> "TwoRowPartition":
        return TwoRowPartition(self.N - 1 - self.b, self.N - 1 - self.a, self.N)

    def __str__(self):
        return f"s{self.a},{self.b}"


def partitions(N: int, codim: int | None = None) -> list[TwoRowPartition]:
    out = [TwoRowPartition(a, b, N) for a in range(N) for b in range(a + 1)]
    return [s for s in out if codim is None or s.codim == codim]


def point_class(N: int) -> TwoRowPartition:
    return TwoRowPartition(N - 1, N - 1, N)


Special = Literal["1", "2", "11"]


def pieri_special(s: TwoRowPartition, special: Special) -> dict[TwoRowPartition, int]:
    """Product of sigma_{a,b} with sigma_1, sigma_2 or sigma_{1,1}.

    sigma_k terms follow the interlacing rule N-1 >= c >= a >= d >= b with
    c + d = a + b + k; sigma_{1,1} shifts both rows by one.
    """
    a, b, N = s.a, s.b, s.N
    out: dict[TwoRowPartition, int] = {}
    if special == "11":
        if a + 1 <= N - 1:
            out[TwoRowPartition(a + 1, b + 1, N)] = 1
        return out
    k = {"1": 1, "2": 2}[special]
    for d in range(b, a + 1):
        c = a + b + k - d
        if a <= c <= N - 1:
            out[TwoRowPartition(c, d, N)] = 1
    return out


def pairing_degree(s: TwoRowPartition, t: TwoRowPartition) -> int:
    if s.N != t.N:
        raise ValueError("partitions from different Grassmannians")
    if s.codim + t.codim != 2 * (s.N - 1):
        raise ValueError("codimensions are not complementary")
    return int(t == s.dual())


@dataclass(frozen=True)
class Ch2Class:
    """ch_2 of the section expressed as c2*sigma_2 + c11*sigma_{1,1}."""

    N: int
    sigma2: Fraction
    sigma11: Fraction


def ch2_class(N: int) -> Ch2Class:
    c = Fraction(N - 3, 2)
    return Ch2Class(N, c, -c)


def _degree(product: dict[TwoRowPartition, int], N: int) -> int:
    return product.get(point_class(N), 0)


def ch2_pair(N: int, surface_class: TwoRowPartition) -> Fraction:
    """ch_2(section) . [S] for a surface class of G(1, N)."""
    if surface_class.N != N or surface_class.codim != 2 * (N - 1) - 2:
        raise ValueError("not a surface class")
    ch = ch2_class(N)
    return ch.sigma2 * _degree(pieri_special(surface_class, "2"), N) + ch.sigma11 * _degree(
        pieri_special(surface_class, "11"), N
    )
