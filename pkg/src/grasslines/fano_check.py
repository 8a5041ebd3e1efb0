"""A plane of lines inside the section, its Schubert class, and the sign of ch_2 on it."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import GeometryError, InvariantViolation
from .exact_algebra import RatMatrix
from .grassmann_schubert import TwoRowPartition, bilinear, ch2_pair
from .lines_solver import ZxReport, decompose
from .projective import LinSubspace, meet, random_vector, span
from .section_model import OrbitLabel, SectionPoint, SectionSpace, sample_orbit

MAX_REDRAWS = 10


@dataclass(frozen=True)
class SweptSurface:
    """All lines of the plane Pi; they sweep a surface of the Grassmannian."""

    plane: LinSubspace
    source: SectionPoint
    ruling: tuple[Fraction, ...]

    @property
    def N(self) -> int:
        return self.plane.ambient


def _isotropic(s: SectionSpace, V: LinSubspace) -> bool:
    rows = V.rows
    return all(bilinear(u, F, w) == 0 for F in (s.A, s.B) for u in rows for w in rows)


def sweep_surface(s: SectionSpace, x: SectionPoint, report: ZxReport, ruling_index: int = 0) -> SweptSurface:
    """Plane spanned by the line of x and one ruling direction of the horizontal component."""
    hs = report.of_kind("horizontal")
    if not hs:
        raise GeometryError("Z_x has no horizontal component to sweep")
    K = hs[0].subspace
    v0 = report.frame.lift(K.rows[ruling_index])
    plane = span(x.p, x.q, v0)
    if plane.dim != 2:
        raise InvariantViolation("sweep-plane", "ruling direction lies on the line")
    if not _isotropic(s, plane):
        raise InvariantViolation("sweep-membership", "some line of the swept plane is not on the section")
    return SweptSurface(plane, x, v0)


def _random_subspace(rng: random.Random, N: int, dim: int) -> LinSubspace:
    while True:
        gens = [random_vector(rng, N + 1) for _ in range(dim + 1)]
        try:
            S = span(*gens)
        except GeometryError:
            continue
        if S.dim == dim:
            return S


def sigma2_count(S: SweptSurface, Lam: LinSubspace) -> int | None:
    """Lines of Pi meeting the (N-3)-plane Lam; None when the incidence is not transverse."""
    return 0 if meet(S.plane, Lam) is None else None


def sigma11_count(S: SweptSurface, H: LinSubspace) -> int | None:
    """Lines of Pi inside the hyperplane H; None when Pi lies in H."""
    m = meet(S.plane, H)
    if m is None or m.dim != 1:
        return None
    return 1


@dataclass(frozen=True)
class EnumerativeClass:
    sigma2: int
    sigma11: int
    redraws: int = field(default=0, compare=False)

    def surface_class(self, N: int) -> dict[TwoRowPartition, int]:
        """Class of S in the basis dual to sigma_2 and sigma_{1,1}."""
        d2 = TwoRowPartition(2, 0, N).dual()
        d11 = TwoRowPartition(1, 1, N).dual()
        return {k: v for k, v in ((d2, self.sigma2), (d11, self.sigma11)) if v}


def _count(counter, S, draws: Iterable[LinSubspace]) -> tuple[int, int]:
    redraws = 0
    for flag in draws:
        c = counter(S, flag)
        if c is not None:
            return c, redraws
        redraws += 1
        if redraws > MAX_REDRAWS:
            break
    raise GeometryError("no transverse flag found")


def enumerative_class(
    S: SweptSurface,
    rng: random.Random,
    lam_flags: Iterable[LinSubspace] = (),
    hyperplanes: Iterable[LinSubspace] = (),
) -> EnumerativeClass:
    """Exact counts S.sigma_2 and S.sigma_{1,1}; the optional flags are tried before random ones."""
    N = S.N

    def draws(given, dim):
        yield from given
        while True:
            yield _random_subspace(rng, N, dim)

    a, r1 = _count(sigma2_count, S, draws(lam_flags, N - 3))
    b, r2 = _count(sigma11_count, S, draws(hyperplanes, N - 1))
    return EnumerativeClass(a, b, r1 + r2)


@dataclass(frozen=True)
class CorollaryResult:
    N: int
    point: SectionPoint
    surface: SweptSurface
    counts: EnumerativeClass
    surface_class: dict
    value: Fraction


def corollary_check(s: SectionSpace, rng: random.Random | None = None) -> CorollaryResult:
    rng = rng or random.Random(0)
    x = sample_orbit(s, OrbitLabel.O1, rng)
    report = decompose(s, x, rng)
    S = sweep_surface(s, x, report)
    counts = enumerative_class(S, rng)
    cls = counts.surface_class(s.N)
    if len(cls) != 1 or next(iter(cls.values())) != 1:
        raise InvariantViolation("surface-class", f"unexpected class {cls}")
    (part,) = cls
    value = ch2_pair(s.N, part)
    if value >= 0:
        raise InvariantViolation("ch2-sign", f"ch2 . [S] = {value} is not negative")
    return CorollaryResult(s.N, x, S, counts, cls, value)
