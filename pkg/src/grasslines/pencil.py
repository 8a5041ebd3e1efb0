"""Pencils lam*A - mu*B of antisymmetric forms dual to a codimension-2 section."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GeometryError, IrrationalRootError, NotGeneralError
from .exact_algebra import (
    BinaryForm,
    RatMatrix,
    gcd_forms,
    inverse,
    kernel,
    pfaffian_form,
    principal_subpfaffians,
    rank,
    rational_roots,
    rref,
    to_rational,
)
from .projective import LinSubspace, ProjPoint


@dataclass(frozen=True)
class AntisymPencil:
    A: RatMatrix
    B: RatMatrix

    def __post_init__(self):
        if self.A.shape != self.B.shape:
            raise GeometryError("A and B must have the same size")
        if not (self.A.is_antisymmetric() and self.B.is_antisymmetric()):
            raise GeometryError("pencil members must be antisymmetric")
        if self.A.nrows < 3:
            raise GeometryError("pencil too small")

    @property
    def size(self) -> int:
        return self.A.nrows

    @property
    def N(self) -> int:
        return self.size - 1

    @property
    def parity(self) -> str:
        return "even" if self.size % 2 == 0 else "odd"

    @property
    def n(self) -> int:
        return self.size // 2

    def member(self, lam, mu) -> RatMatrix:
        return self.A.scale(lam) - self.B.scale(mu)


# normal forms: G(1,5) (even, size 6) and G(1,4) (odd, size 5)

_J = ((0, -1), (1, 0))

EQ2_A = RatMatrix.block_diag(RatMatrix(_J), RatMatrix(_J), RatMatrix(_J))
EQ2_B = RatMatrix.block_diag(RatMatrix(_J), RatMatrix.zeros(2, 2), RatMatrix(_J).scale(-1))

EQ3_A = RatMatrix(
    [
        [0, 0, -1, 0, 0],
        [0, 0, 0, -1, 0],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ]
)
EQ3_B = RatMatrix(
    [
        [0, 0, 0, -1, 0],
        [0, 0, 0, 0, -1],
        [0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
    ]
)


def g15_pencil() -> AntisymPencil:
    return AntisymPencil(EQ2_A, EQ2_B)


def g14_pencil() -> AntisymPencil:
    return AntisymPencil(EQ3_A, EQ3_B)


def builtin_pencil(name: str) -> AntisymPencil:
    try:
        return {"g14": g14_pencil, "g15": g15_pencil}[name]()
    except KeyError:
        raise GeometryError(f"unknown space {name!r}; expected g14 or g15") from None


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneralityCertificate:
    general: bool
    parity: str
    reason: str | None = None
    pfaffian: BinaryForm | None = None
    roots: tuple = ()
    residual: BinaryForm | None = None
    subpfaffian_gcd: BinaryForm | None = None


@dataclass(frozen=True)
class DegenerateMember:
    parameter: tuple[int, int]
    kernel: LinSubspace


def generality_check(p: AntisymPencil) -> GeneralityCertificate:
    if rank(RatMatrix([p.A.flatten(), p.B.flatten()])) < 2:
        return GeneralityCertificate(False, p.parity, "pencil not 2-dimensional")
    if p.parity == "even":
        f = pfaffian_form(p.A, p.B)
        if f.is_zero():
            return GeneralityCertificate(False, p.parity, "every member is degenerate", pfaffian=f)
        # squarefree iff the two partials are coprime (Euler relation)
        if gcd_forms([f.d_r(), f.d_s()]).degree > 0:
            return GeneralityCertificate(False, p.parity, "Pfaffian has a repeated root", pfaffian=f)
        roots, residual = rational_roots(f)
        return GeneralityCertificate(True, p.parity, pfaffian=f, roots=tuple(r for r, _ in roots), residual=residual)
    g = gcd_forms(principal_subpfaffians(p.A, p.B, 2 * p.n))
    if g.is_zero() or g.degree > 0:
        return GeneralityCertificate(False, p.parity, "some member has rank below 2n", subpfaffian_gcd=g)
    return GeneralityCertificate(True, p.parity, subpfaffian_gcd=g)


def _require_general(p: AntisymPencil) -> GeneralityCertificate:
    cert = generality_check(p)
    if not cert.general:
        raise NotGeneralError(f"pencil not general: {cert.reason}")
    return cert


def exceptional_lines(p: AntisymPencil) -> tuple[DegenerateMember, ...]:
    """Kernels of the singular members of a general even pencil, ordered by rref pivots."""
    if p.parity != "even":
        raise GeometryError("exceptional lines exist only for even pencils")
    cert = _require_general(p)
    if cert.residual.degree > 0:
        raise IrrationalRootError(
            f"Pfaffian has non-rational roots: residual factor {cert.residual}", cert.residual
        )
    members = []
    for lam, mu in cert.roots:
        K = kernel(p.member(lam, mu))
        if K.nrows != 2:
            raise NotGeneralError("degenerate member with kernel of dimension != 2")
        members.append(DegenerateMember((lam, mu), LinSubspace(K)))
    members.sort(key=lambda m: (rref(m.kernel.basis)[1], m.kernel.basis.rows))
    return tuple(members)


# ---------------------------------------------------------------------------
# odd pencils: center curve


def center_curve_forms(p: AntisymPencil) -> tuple[BinaryForm, ...]:
    """Kernel vector of lam*A - mu*B as forms of degree n: signed principal sub-Pfaffians."""
    if p.parity != "odd":
        raise GeometryError("center curve exists only for odd pencils")
    subs = principal_subpfaffians(p.A, p.B, p.size - 1)
    # combinations omit index size-1-i in position i
    forms = []
    for i in range(p.size):
        f = subs[p.size - 1 - i]
        forms.append(f if i % 2 == 0 else -f)
    return tuple(forms)


def center_curve_point(p: AntisymPencil, param: Sequence) -> ProjPoint:
    if p.parity != "odd":
        raise GeometryError("center curve exists only for odd pencils")
    lam, mu = param
    K = kernel(p.member(lam, mu))
    if K.nrows != 1:
        raise GeometryError(f"pencil not general at ({lam}:{mu})")
    return ProjPoint.of(K.rows[0])


def hyperplane_curve_point(p: AntisymPencil, param: Sequence) -> LinSubspace:
    c = center_curve_point(p, param).vector
    stacked = RatMatrix([p.A.vecmul(c), p.B.vecmul(c)])
    if rank(stacked) != 1:
        raise GeometryError("cA and cB are not proportional")
    return LinSubspace(kernel(stacked))


# ---------------------------------------------------------------------------
# even normalization


@dataclass(frozen=True)
class EvenNormalization:
    """x = T y turns the section into the standard block form.

    ``mobius`` = [[al, be], [ga, de]] gives the new generators
    A' = al*A + be*B and B' = ga*A + de*B with T^t A' T and T^t B' T standard.
    """

    T: RatMatrix
    mobius: RatMatrix
    pencil: AntisymPencil


def is_even_normal_form(p: AntisymPencil) -> bool:
    return p.A == EQ2_A and p.B == EQ2_B


def _three_point_matrix(pts) -> RatMatrix:
    """2x2 matrix sending e1, e2, e1+e2 to multiples of pts[0], pts[1], pts[2]."""
    (x0, y0), (x1, y1), (x2, y2) = pts
    M = RatMatrix([[x0, x1], [y0, y1]])
    k0, k1 = inverse(M).apply((x2, y2))
    return RatMatrix([[k0 * x0, k1 * x1], [k0 * y0, k1 * y1]])


def _block_coefficients(F: RatMatrix, u, w) -> Fraction:
    # restriction of F to span(u, w) equals c * J with J = [[0,-1],[1,0]]
    return -sum((a * b for a, b in zip(F.vecmul(u), w)), Fraction(0))


def normalize_even(p: AntisymPencil) -> EvenNormalization:
    if p.parity != "even" or p.size != 6:
        raise GeometryError("even normalization is implemented for 6x6 pencils")
    lines = exceptional_lines(p)
    bases = [m.kernel.rows for m in lines]
    ab = [(_block_coefficients(p.A, u, w), _block_coefficients(p.B, u, w)) for u, w in bases]
    targets = [(1, 1), (1, 0), (1, -1)]
    P = _three_point_matrix(targets) @ inverse(_three_point_matrix(ab))
    cols = []
    for (u, w), (a, b) in zip(bases, ab):
        c = 1 / (P[0, 0] * a + P[0, 1] * b)
        cols.append(u)
        cols.append(tuple(c * x for x in w))
    T = RatMatrix(cols).T()
    A2 = p.A.scale(P[0, 0]) + p.B.scale(P[0, 1])
    B2 = p.A.scale(P[1, 0]) + p.B.scale(P[1, 1])
    normalized = AntisymPencil(T.T() @ A2 @ T, T.T() @ B2 @ T)
    if not is_even_normal_form(normalized):
        raise AssertionError("normalization did not reach the standard block form")
    return EvenNormalization(T, P, normalized)


# ---------------------------------------------------------------------------
# file format


def pencil_to_dict(p: AntisymPencil) -> dict:
    return {"n": p.n, "parity": p.parity, "A": p.A.to_strings(), "B": p.B.to_strings()}


def pencil_to_json(p: AntisymPencil) -> str:
    return json.dumps(pencil_to_dict(p), indent=2)


def pencil_from_dict(d: dict) -> AntisymPencil:
    try:
        n, parity, A, B = d["n"], d["parity"], d["A"], d["B"]
    except (KeyError, TypeError) as exc:
        raise GeometryError(f"pencil file missing field {exc}") from None
    if parity not in ("even", "odd"):
        raise GeometryError("parity must be 'even' or 'odd'")
    try:
        pencil = AntisymPencil(
            RatMatrix([[to_rational(x) for x in row] for row in A]),
            RatMatrix([[to_rational(x) for x in row] for row in B]),
        )
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, GeometryError):
            raise
        raise GeometryError(f"bad matrix entry: {exc}") from None
    expected = 2 * n if parity == "even" else 2 * n + 1
    if pencil.size != expected:
        raise GeometryError(f"{parity} pencil with n={n} must have size {expected}, got {pencil.size}")
    return pencil


def pencil_from_json(text: str) -> AntisymPencil:
    return pencil_from_dict(json.loads(text))
