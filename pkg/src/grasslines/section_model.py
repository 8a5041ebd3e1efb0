"""The codimension-2 section as a computable object: membership, invariant geometry, orbits."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import GeometryError, InvariantViolation, NotGeneralError, NotMemberError
from .exact_algebra import BinaryForm, RatMatrix, kernel, rank, solve_left
from .grassmann_schubert import bilinear
from .pencil import (
    AntisymPencil,
    DegenerateMember,
    EvenNormalization,
    center_curve_forms,
    exceptional_lines,
    generality_check,
    normalize_even,
)
from .projective import LinSubspace, ProjPoint, line_through, meet, random_in, random_vector, span

MAX_TRIES = 200


class OrbitLabel(str, Enum):
    O1 = "o1"
    O2 = "o2"
    O3 = "o3"
    O4 = "o4"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SectionPoint:
    """A line of P^N whose Plücker point lies on the section."""

    line: LinSubspace
    orbit: OrbitLabel | None = field(default=None, compare=False)

    @property
    def p(self) -> tuple[Fraction, ...]:
        return self.line.rows[0]

    @property
    def q(self) -> tuple[Fraction, ...]:
        return self.line.rows[1]

    def __str__(self):
        return str(self.line)


@dataclass(frozen=True)
class CenterConic:
    """Conic C in the plane P, written through coordinates z on P.

    The center curve is lam^2 C0 + lam*mu C1 + mu^2 C2; a point z0 C0 + z1 C1 + z2 C2
    of P lies on C exactly when z1^2 - z0 z2 = 0.
    """

    forms: tuple[BinaryForm, ...]
    basis: RatMatrix  # rows C0, C1, C2

    def coords(self, y: Sequence) -> tuple[Fraction, ...]:
        return solve_left(y, self.basis)

    def quad(self, z) -> Fraction:
        return z[1] * z[1] - z[0] * z[2]

    def polar(self, z, w) -> Fraction:
        return z[1] * w[1] - (z[0] * w[2] + z[2] * w[0]) / 2

    def contains(self, y: Sequence) -> bool:
        return self.quad(self.coords(y)) == 0

    def point(self, lam, mu) -> tuple[Fraction, ...]:
        return tuple(Fraction(f(lam, mu)) for f in self.forms)

    def tangent_basis(self, lam, mu) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        return (
            tuple(Fraction(f.d_r()(lam, mu)) for f in self.forms),
            tuple(Fraction(f.d_s()(lam, mu)) for f in self.forms),
        )

    def is_tangent(self, line: LinSubspace) -> bool:
        a, b = (self.coords(v) for v in line.rows)
        return self.polar(a, b) ** 2 - self.quad(a) * self.quad(b) == 0


class SectionSpace:
    """X = G(1,4) cut by two hyperplanes, or Y = G(1,5) cut by two hyperplanes."""

    def __init__(self, pencil: AntisymPencil):
        cert = generality_check(pencil)
        if not cert.general:
            raise NotGeneralError(f"pencil not general: {cert.reason}")
        self.pencil = pencil
        self.certificate = cert
        if self.parity == "even":
            self.exceptional: tuple[DegenerateMember, ...] = exceptional_lines(pencil)
            self.lines = tuple(m.kernel for m in self.exceptional)
            k = len(self.lines)
            self.V = tuple(
                span(*[self.lines[i] for i in range(k) if i != j]) for j in range(k)
            )
        else:
            if pencil.size != 5:
                raise GeometryError("odd sections are supported for G(1,4) only")
            # zero entries may come back as constant forms; lift them to degree 2
            forms = tuple(
                BinaryForm.zero(2) if f.is_zero() else f for f in center_curve_forms(pencil)
            )
            if any(f.degree != 2 for f in forms):
                raise GeometryError("center curve is not a conic")
            basis = RatMatrix([[f.coeffs[k] for f in forms] for k in range(3)])
            if rank(basis) != 3:
                raise GeometryError("center curve does not span a plane")
            self.conic = CenterConic(forms, basis)
            self.plane = LinSubspace(basis)

    @property
    def A(self) -> RatMatrix:
        return self.pencil.A

    @property
    def B(self) -> RatMatrix:
        return self.pencil.B

    @property
    def parity(self) -> str:
        return self.pencil.parity

    @property
    def N(self) -> int:
        return self.pencil.N

    @cached_property
    def normal_frame(self) -> EvenNormalization:
        """Coordinates x = T y in which the pencil takes the standard block form."""
        if self.parity != "even":
            raise GeometryError("normal frame is computed for even sections only")
        return normalize_even(self.pencil)

    # -- membership ---------------------------------------------------------

    def pairings(self, line: LinSubspace) -> tuple[Fraction, Fraction]:
        if line.ambient != self.N:
            raise GeometryError("ambient mismatch")
        if line.dim != 1:
            raise GeometryError("not a line")
        p, q = line.rows
        return bilinear(p, self.A, q), bilinear(p, self.B, q)

    def contains(self, line: LinSubspace) -> bool:
        return self.pairings(line) == (0, 0)

    def point(self, line: LinSubspace | Sequence) -> SectionPoint:
        if not isinstance(line, LinSubspace):
            line = line_through(*line)
        pa, pb = self.pairings(line)
        if pa or pb:
            raise NotMemberError(f"line is not on the section: pA q = {pa}, pB q = {pb}", (pa, pb))
        return SectionPoint(line)

    def point_kernel(self, p: Sequence) -> RatMatrix:
        """Vectors q with pA q = pB q = 0, i.e. all section lines through p."""
        return kernel(RatMatrix([self.A.vecmul(p), self.B.vecmul(p)]))


def membership(s: SectionSpace, line: LinSubspace) -> bool:
    return s.contains(line)


# ---------------------------------------------------------------------------
# orbit classification


def _classify_even(s: SectionSpace, line: LinSubspace) -> OrbitLabel:
    hits = sum(meet(line, li) is not None for li in s.lines)
    if hits >= 3:
        raise InvariantViolation("three-exceptional-lines", f"{line} meets every exceptional line")
    if hits == 2:
        return OrbitLabel.O1
    if hits == 1:
        return OrbitLabel.O2
    if any(meet(line, Vj) is not None for Vj in s.V):
        return OrbitLabel.O3
    return OrbitLabel.O4


def _classify_odd(s: SectionSpace, line: LinSubspace) -> OrbitLabel:
    if s.plane.contains(line):
        return OrbitLabel.O1 if s.conic.is_tangent(line) else OrbitLabel.O2
    m = meet(line, s.plane)
    if m is None:
        return OrbitLabel.O4
    y = m.rows[0]
    if not s.conic.contains(y):
        raise InvariantViolation("meets-plane-off-conic", f"{line} meets P at {ProjPoint.of(y)} off C")
    return OrbitLabel.O3


def classify_orbit(s: SectionSpace, x: SectionPoint | LinSubspace) -> OrbitLabel:
    line = x.line if isinstance(x, SectionPoint) else x
    if not s.contains(line):
        raise NotMemberError("classification needs a member line", s.pairings(line))
    if s.parity == "even":
        return _classify_even(s, line)
    return _classify_odd(s, line)


def check_meets_all_V(s: SectionSpace, x: SectionPoint | LinSubspace) -> bool:
    if s.parity != "even":
        raise GeometryError("the spaces V_j exist only for even sections")
    line = x.line if isinstance(x, SectionPoint) else x
    hits = [meet(line, Vj) is not None for Vj in s.V]
    return all(hits) or not any(hits)


# ---------------------------------------------------------------------------
# samplers


def sample_member_through(s: SectionSpace, p: Sequence, rng: random.Random) -> SectionPoint:
    """Random section line through the point p."""
    K = s.point_kernel(p)
    for _ in range(MAX_TRIES):
        q = random_in(K, rng)
        if rank(RatMatrix([p, q])) == 2:
            return SectionPoint(line_through(p, q))
    raise GeometryError("no section line through this point")


def _candidate(s: SectionSpace, label: OrbitLabel, rng: random.Random) -> LinSubspace | None:
    if s.parity == "even":
        k = len(s.lines)
        if label is OrbitLabel.O1:
            i, j = rng.sample(range(k), 2)
            return line_through(random_in(s.lines[i], rng), random_in(s.lines[j], rng))
        if label is OrbitLabel.O2:
            u = random_in(s.lines[rng.randrange(k)], rng)
        elif label is OrbitLabel.O3:
            j = rng.randrange(k)
            a, b = [li for i, li in enumerate(s.lines) if i != j]
            u = tuple(x + y for x, y in zip(random_in(a, rng), random_in(b, rng)))
        else:
            u = random_vector(rng, s.N + 1)
    else:
        if label is OrbitLabel.O1:
            lam, mu = random_vector(rng, 2)
            return span(*s.conic.tangent_basis(lam, mu))
        if label is OrbitLabel.O2:
            a, b = random_in(s.plane, rng), random_in(s.plane, rng)
            return span(a, b) if rank(RatMatrix([a, b])) == 2 else None
        if label is OrbitLabel.O3:
            lam, mu = random_vector(rng, 2)
            u = s.conic.point(lam, mu)
        else:
            u = random_vector(rng, s.N + 1)
    q = random_in(s.point_kernel(u), rng)
    if rank(RatMatrix([u, q])) < 2:
        return None
    return line_through(u, q)


def sample_orbit(s: SectionSpace, label: OrbitLabel | str, rng: random.Random) -> SectionPoint:
    label = OrbitLabel(label)
    for _ in range(MAX_TRIES):
        line = _candidate(s, label, rng)
        if line is not None and classify_orbit(s, line) is label:
            return SectionPoint(line, label)
    raise GeometryError(f"could not sample orbit {label} after {MAX_TRIES} tries")


def sample_member(s: SectionSpace, rng: random.Random) -> SectionPoint:
    """Member drawn with each orbit equally likely."""
    return sample_orbit(s, rng.choice(list(OrbitLabel)), rng)
