"""Points and linear subspaces of rational projective space."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import GeometryError
from .exact_algebra import RatMatrix, canonical_projective, kernel, rref, to_rational

DEFAULT_BOUND = 20


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^N stored as coprime integers with first nonzero entry positive."""

    coords: tuple[int, ...]

    @classmethod
    def of(cls, vec: Sequence) -> "ProjPoint":
        return cls(canonical_projective(vec))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.coords)

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class LinSubspace:
    """A k-plane P(U) of P^N, stored by the rref basis of U."""

    basis: RatMatrix

    def __post_init__(self):
        R, piv = rref(self.basis)
        if len(piv) != self.basis.nrows:
            raise GeometryError("basis rows are linearly dependent")
        if len(piv) == 0:
            raise GeometryError("empty basis")
        object.__setattr__(self, "basis", R)

    @property
    def ambient(self) -> int:
        return self.basis.ncols - 1

    @property
    def dim(self) -> int:
        return self.basis.nrows - 1

    @property
    def rows(self):
        return self.basis.rows

    def annihilator(self) -> RatMatrix:
        """Linear functionals (as rows) cutting out the subspace."""
        return kernel(self.basis)

    def contains(self, other: Union["LinSubspace", ProjPoint, Sequence]) -> bool:
        ann = self.annihilator().rows
        for v in _generator_rows(other):
            if len(v) != self.basis.ncols:
                raise GeometryError("ambient mismatch")
            if any(sum((a * b for a, b in zip(f, v)), Fraction(0)) != 0 for f in ann):
                return False
        return True

    def point(self) -> ProjPoint:
        if self.dim != 0:
            raise GeometryError("not a point")
        return ProjPoint.of(self.basis.rows[0])

    def __str__(self):
        return "P<" + ", ".join("(" + ",".join(str(x) for x in r) + ")" for r in self.rows) + ">"


def _generator_rows(g) -> list[tuple[Fraction, ...]]:
    if isinstance(g, LinSubspace):
        return list(g.basis.rows)
    if isinstance(g, ProjPoint):
        return [g.vector]
    if isinstance(g, RatMatrix):
        return list(g.rows)
    return [tuple(to_rational(x) for x in g)]


def span(*gens) -> LinSubspace:
    """Smallest subspace containing all generators (vectors, points or subspaces)."""
    rows = [r for g in gens for r in _generator_rows(g)]
    if not rows:
        raise GeometryError("span of nothing")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise GeometryError("ambient mismatch")
    R, piv = rref(RatMatrix(rows, n))
    if not piv:
        raise GeometryError("all generators are zero")
    return LinSubspace(RatMatrix(R.rows[: len(piv)], n))


def line_through(p: Sequence, q: Sequence) -> LinSubspace:
    ln = span(p, q)
    if ln.dim != 1:
        raise GeometryError("points do not span a line")
    return ln


def meet(S: LinSubspace, T: LinSubspace) -> LinSubspace | None:
    """Intersection of two subspaces; None when it is empty."""
    if S.ambient != T.ambient:
        raise GeometryError("ambient mismatch")
    constraints = S.annihilator().vstack(T.annihilator())
    K = kernel(constraints)
    if K.nrows == 0:
        return None
    return LinSubspace(K)


def incident(a: LinSubspace, b: LinSubspace) -> bool:
    return meet(a, b) is not None


def random_vector(rng: random.Random, n: int, bound: int = DEFAULT_BOUND) -> tuple[Fraction, ...]:
    while True:
        v = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
        if any(v):
            return v


def random_point(rng: random.Random, N: int, bound: int = DEFAULT_BOUND) -> ProjPoint:
    return ProjPoint.of(random_vector(rng, N + 1, bound))


def random_in(rows: RatMatrix | LinSubspace, rng: random.Random, bound: int = DEFAULT_BOUND) -> tuple[Fraction, ...]:
    """Random nonzero integer combination of the given basis rows."""
    basis = rows.basis if isinstance(rows, LinSubspace) else rows
    if basis.nrows == 0:
        raise GeometryError("cannot sample from the zero space")
    while True:
        c = random_vector(rng, basis.nrows, bound)
        v = basis.vecmul(c)
        if any(v):
            return v


def spawn(rng: random.Random, k: int) -> list[random.Random]:
    """Independent child streams for concurrent sampling."""
    return [random.Random(rng.getrandbits(64)) for _ in range(k)]
