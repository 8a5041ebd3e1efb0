"""Automorphisms of the section inside PGL(N+1): membership, samplers and orbit transporters."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GeometryError, InvariantViolation
from .exact_algebra import RatMatrix, det, inverse, kernel, rank
from .pencil import EQ3_A, EQ3_B
from .projective import LinSubspace, ProjPoint, meet, span
from .section_model import OrbitLabel, SectionPoint, SectionSpace, classify_orbit

Block = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class ProjectiveMap:
    """P(T) for invertible T, stored with the first nonzero entry scaled to 1."""

    matrix: RatMatrix

    def __post_init__(self):
        M = self.matrix
        if M.nrows != M.ncols:
            raise GeometryError("projective map needs a square matrix")
        if det(M) == 0:
            raise GeometryError("singular matrix does not define a projective map")
        lead = next(x for x in M.flatten() if x != 0)
        if lead != 1:
            object.__setattr__(self, "matrix", M.scale(1 / lead))

    @property
    def size(self) -> int:
        return self.matrix.nrows

    def __matmul__(self, other: "ProjectiveMap") -> "ProjectiveMap":
        return ProjectiveMap(self.matrix @ other.matrix)

    def inverse(self) -> "ProjectiveMap":
        return ProjectiveMap(inverse(self.matrix))

    def apply_vector(self, v: Sequence) -> tuple[Fraction, ...]:
        return self.matrix.apply(v)

    def apply_point(self, v: Sequence | ProjPoint) -> ProjPoint:
        vec = v.vector if isinstance(v, ProjPoint) else v
        return ProjPoint.of(self.apply_vector(vec))

    def apply_line(self, x: LinSubspace | SectionPoint) -> LinSubspace:
        line = x.line if isinstance(x, SectionPoint) else x
        return span(*[self.apply_vector(r) for r in line.rows])


def _as_matrix(T) -> RatMatrix:
    return T.matrix if isinstance(T, ProjectiveMap) else T


def is_automorphism(s: SectionSpace, T: ProjectiveMap | RatMatrix) -> bool:
    """Both T^t A T and T^t B T stay in span{A, B}."""
    M = _as_matrix(T)
    if M.shape != s.A.shape:
        raise GeometryError("size mismatch")
    if det(M) == 0:
        raise GeometryError("singular matrix")
    base = [s.A.flatten(), s.B.flatten()]
    for F in (s.A, s.B):
        image = (M.T() @ F @ M).flatten()
        if rank(RatMatrix(base + [image])) != 2:
            return False
    return True


# ---------------------------------------------------------------------------
# even sections: work in the standard block frame and conjugate back

STANDARD_B = (1, 0, -1)  # block coefficients of B in the standard form; A has (1, 1, 1)


def compensated_permutation(sigma: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Block determinants d making the sigma-permutation an automorphism of the standard form.

    The image coefficient triple of a standard member m is (d_i m_{sigma(i)}); it lies in
    the span exactly when u_0 + u_2 = 2 u_1. Returns None when no solution has all d_i != 0.
    """
    eqs = RatMatrix(
        [
            [1, -2, 1],
            [STANDARD_B[sigma[0]], -2 * STANDARD_B[sigma[1]], STANDARD_B[sigma[2]]],
        ]
    )
    K = kernel(eqs)
    if K.nrows != 1 or any(x == 0 for x in K.rows[0]):
        return None
    d = K.rows[0]
    return tuple(x / d[0] for x in d)


def rational_block_permutations() -> dict[tuple[int, ...], tuple[Fraction, ...]]:
    """Every sigma in S3 together with its block determinants (all of S3 is realizable over Q)."""
    out = {}
    for sigma in itertools.permutations(range(3)):
        d = compensated_permutation(sigma)
        if d is not None:
            out[sigma] = d
    return out


@dataclass(frozen=True)
class EvenGenerator:
    """Block matrix sending block i to block sigma(i) through t_i, then through diag(d_i, 1)."""

    blocks: tuple[Block, Block, Block]
    sigma: tuple[int, int, int] = (0, 1, 2)
    scalars: tuple[Fraction, Fraction, Fraction] = (Fraction(1),) * 3

    def matrix(self) -> RatMatrix:
        rows = [[Fraction(0)] * 6 for _ in range(6)]
        for i, (t, d) in enumerate(zip(self.blocks, self.scalars)):
            scaled = ((d * t[0][0], d * t[0][1]), (t[1][0], t[1][1]))
            j = self.sigma[i]
            for a in range(2):
                for b in range(2):
                    rows[2 * j + a][2 * i + b] = scaled[a][b]
        return RatMatrix(rows)


def _frame(s: SectionSpace) -> tuple[RatMatrix, RatMatrix]:
    T = s.normal_frame.T
    return T, inverse(T)


def _from_normal(s: SectionSpace, G: RatMatrix) -> ProjectiveMap:
    T, Ti = _frame(s)
    return ProjectiveMap(T @ G @ Ti)


def _to_normal(s: SectionSpace, v: Sequence) -> tuple[Fraction, ...]:
    return _frame(s)[1].apply(v)


def _blocks(v: Sequence) -> list[tuple[Fraction, Fraction]]:
    return [(v[2 * i], v[2 * i + 1]) for i in range(len(v) // 2)]


def _complete(col: Sequence) -> Block:
    """2x2 matrix of determinant 1 with the given first column."""
    x, y = Fraction(col[0]), Fraction(col[1])
    if x != 0:
        return ((x, Fraction(0)), (y, 1 / x))
    if y == 0:
        raise GeometryError("cannot complete a zero column")
    return ((x, -1 / y), (y, Fraction(0)))


IDENTITY_BLOCK: Block = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def _random_sl2(rng: random.Random, steps: int = 3, bound: int = 3) -> Block:
    M = RatMatrix.identity(2)
    for _ in range(steps):
        k = rng.randint(-bound, bound)
        E = RatMatrix([[1, k], [0, 1]]) if rng.random() < 0.5 else RatMatrix([[1, 0], [k, 1]])
        M = M @ E
    return (tuple(M.rows[0]), tuple(M.rows[1]))


def sample_even_generator(rng: random.Random) -> EvenGenerator:
    perms = rational_block_permutations()
    sigma = rng.choice(sorted(perms))
    blocks = tuple(_random_sl2(rng) for _ in range(3))
    return EvenGenerator(blocks, sigma, perms[sigma])


# ---------------------------------------------------------------------------
# odd section (standard form only)


def sym2(g: RatMatrix) -> RatMatrix:
    """Action of g on binary quadrics in the center-curve coordinates (mu^2, mu*lam, lam^2)."""
    (a, b), (c, d) = g.rows
    return RatMatrix(
        [
            [d * d, 2 * c * d, c * c],
            [b * d, a * d + b * c, a * c],
            [b * b, 2 * a * b, a * a],
        ]
    )


@dataclass(frozen=True)
class OddGenerator:
    """[[alpha I2, 0], [S, I3]] . diag(t2, t3) with S Hankel and t3 = Sym^2(g)."""

    alpha: Fraction
    hankel: tuple[Fraction, Fraction, Fraction, Fraction]
    g: RatMatrix

    def S(self) -> RatMatrix:
        h = self.hankel
        return RatMatrix([[h[0], h[1]], [h[1], h[2]], [h[2], h[3]]])

    def t3(self) -> RatMatrix:
        return sym2(self.g)

    def t2(self) -> RatMatrix | None:
        """Solve t2^t A12 t3 = x A12 + y B12 and t2^t B12 t3 = z A12 + w B12 for t2."""
        A12 = EQ3_A.submatrix((0, 1), (2, 3, 4))
        B12 = EQ3_B.submatrix((0, 1), (2, 3, 4))
        t3 = self.t3()
        # unknowns: G (row-major, 4 entries), then x, y, z, w
        rows = []
        for F, first in ((A12, 4), (B12, 6)):
            Ft = F @ t3
            for i in range(2):
                for j in range(3):
                    row = [Fraction(0)] * 8
                    for k in range(2):
                        row[2 * i + k] = Ft[k, j]
                    row[first] = -A12[i, j]
                    row[first + 1] = -B12[i, j]
                    rows.append(row)
        K = kernel(RatMatrix(rows))
        if K.nrows != 1:
            return None
        v = K.rows[0]
        G = RatMatrix([[v[0], v[1]], [v[2], v[3]]])
        if det(G) == 0:
            return None
        return G.T()

    def matrix(self) -> RatMatrix | None:
        t2 = self.t2()
        if t2 is None:
            return None
        low = RatMatrix.identity(5)
        rows = [list(r) for r in low.rows]
        for i in range(2):
            rows[i][i] = Fraction(self.alpha)
        S = self.S()
        for i in range(3):
            for j in range(2):
                rows[2 + i][j] = S[i, j]
        diag = RatMatrix.block_diag(t2, self.t3())
        return RatMatrix(rows) @ diag


def sample_odd_generator(rng: random.Random) -> OddGenerator:
    alpha = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    hankel = tuple(Fraction(rng.randint(-3, 3)) for _ in range(4))
    b = _random_sl2(rng, steps=2, bound=2)
    return OddGenerator(alpha, hankel, RatMatrix(b))


# ---------------------------------------------------------------------------


def sample_automorphism(s: SectionSpace, rng: random.Random, max_tries: int = 50) -> ProjectiveMap:
    """Random element of the automorphism group; every output passes is_automorphism."""
    for _ in range(max_tries):
        if s.parity == "even":
            T = _from_normal(s, sample_even_generator(rng).matrix())
        else:
            if s.A != EQ3_A or s.B != EQ3_B:
                raise GeometryError("odd automorphisms are sampled in the standard form only")
            M = sample_odd_generator(rng).matrix()
            if M is None or det(M) == 0:
                continue
            T = ProjectiveMap(M)
        if is_automorphism(s, T):
            return T
    raise GeometryError("no verified automorphism produced")


# ---------------------------------------------------------------------------
# transporters (even sections)


def _require_even(s: SectionSpace):
    if s.parity != "even" or s.N != 5:
        raise GeometryError("transporters are implemented for G(1,5) sections")


def _block_matrix(blocks: Sequence[Block]) -> RatMatrix:
    return RatMatrix.block_diag(*[RatMatrix(b) for b in blocks])


def _checked(s: SectionSpace, T: ProjectiveMap, src, dst, what: str) -> ProjectiveMap:
    if not is_automorphism(s, T):
        raise InvariantViolation("transporter-automorphism", f"{what} produced a non-automorphism")
    if isinstance(src, LinSubspace):
        ok = T.apply_line(src) == dst
    else:
        ok = T.apply_point(src) == ProjPoint.of(dst)
    if not ok:
        raise InvariantViolation("transporter-target", f"{what} does not reach the target")
    return T


BASE_OFF_V = (1, 0, 1, 0, 1, 0)


def _normal_off_V(y: Sequence) -> RatMatrix:
    blocks = _blocks(y)
    if any(b == (0, 0) for b in blocks):
        raise GeometryError("point lies in V")
    return _block_matrix([_complete(b) for b in blocks])


def transport_point_off_V(s: SectionSpace, q: Sequence | ProjPoint) -> ProjectiveMap:
    """Automorphism sending the base point (1:0:1:0:1:0) of the normal frame to q."""
    _require_even(s)
    qv = q.vector if isinstance(q, ProjPoint) else q
    T = _from_normal(s, _normal_off_V(_to_normal(s, qv)))
    base = s.normal_frame.T.apply(BASE_OFF_V)
    return _checked(s, T, base, qv, "transport_point_off_V")


def _zero_block(y: Sequence) -> int:
    zeros = [i for i, b in enumerate(_blocks(y)) if b == (0, 0)]
    if len(zeros) != 1:
        raise GeometryError("point is not in V minus the exceptional lines")
    return zeros[0]


def _perm_to(first: int, second: int) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """A realizable sigma with sigma(0) = first and sigma(1) = second."""
    third = 3 - first - second
    sigma = (first, second, third)
    return sigma, compensated_permutation(sigma)


def _normal_in_V(y: Sequence) -> RatMatrix:
    """Automorphism of the standard form sending (0:0:1:0:1:0) to y in V minus the lines."""
    j = _zero_block(y)
    others = [i for i in range(3) if i != j]
    sigma, d = _perm_to(j, others[0])
    P = EvenGenerator((IDENTITY_BLOCK,) * 3, sigma, d).matrix()
    image = _blocks(P.apply((0, 0, 1, 0, 1, 0)))
    yb = _blocks(y)
    blocks = []
    for k in range(3):
        if k == j:
            blocks.append(IDENTITY_BLOCK)
        else:
            c = image[k][0]
            blocks.append(_complete((yb[k][0] / c, yb[k][1] / c)))
    return _block_matrix(blocks) @ P


def transport_point_in_V(s: SectionSpace, p: Sequence, q: Sequence) -> ProjectiveMap:
    _require_even(s)
    yp, yq = _to_normal(s, p), _to_normal(s, q)
    T = _from_normal(s, _normal_in_V(yq) @ inverse(_normal_in_V(yp)))
    return _checked(s, T, p, q, "transport_point_in_V")


# line transport: R(x) sends the normal-form representative of the orbit of x to x

NORMAL_REPRESENTATIVES = {
    OrbitLabel.O1: ((1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)),
    OrbitLabel.O2: ((1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 1, 0)),
    OrbitLabel.O3: ((0, 0, 1, 0, 1, 0), (1, 0, 0, 0, 1, 0)),
    OrbitLabel.O4: ((1, 0, 1, 0, 1, 0), (1, 1, 1, -2, 1, 1)),
}


def o4_unipotent_blocks(q: Sequence) -> tuple[Block, Block, Block]:
    """Blocks fixing (1:0:1:0:1:0) and sending (1,1,1,-2,1,1) to q = (q1,1,q3,-2,q5,1)."""
    q = [Fraction(x) for x in q]
    if (q[1], q[3], q[5]) != (1, -2, 1):
        raise GeometryError("q must have the shape (q1, 1, q3, -2, q5, 1)")
    one, zero = Fraction(1), Fraction(0)
    return (
        ((one, q[0] - 1), (zero, one)),
        ((one, (1 - q[2]) / 2), (zero, one)),
        ((one, q[4] - 1), (zero, one)),
    )


def _hits(line: LinSubspace, subspaces) -> list[tuple[int, tuple[Fraction, ...]]]:
    out = []
    for i, S in enumerate(subspaces):
        m = meet(line, S)
        if m is not None:
            out.append((i, m.rows[0]))
    return out


def _normal_lines():
    e = [[Fraction(int(i == k)) for i in range(6)] for k in range(6)]
    lines = [span(e[2 * i], e[2 * i + 1]) for i in range(3)]
    Vs = [span(*[lines[i] for i in range(3) if i != j]) for j in range(3)]
    return lines, Vs


def _normal_line_map(line: LinSubspace, label: OrbitLabel) -> RatMatrix:
    lines, Vs = _normal_lines()
    if label is OrbitLabel.O1:
        (i, u), (j, w) = _hits(line, lines)
        sigma, d = _perm_to(i, j)
        P = EvenGenerator((IDENTITY_BLOCK,) * 3, sigma, d).matrix()
        blocks = [IDENTITY_BLOCK] * 3
        blocks[i] = _complete(tuple(x / d[0] for x in _blocks(u)[i]))
        blocks[j] = _complete(tuple(x / d[1] for x in _blocks(w)[j]))
        return _block_matrix(blocks) @ P
    if label is OrbitLabel.O2:
        ((i, u),) = _hits(line, lines)
        v = meet(line, Vs[i]).rows[0]
        others = [k for k in range(3) if k != i]
        sigma, d = _perm_to(i, others[0])
        P = EvenGenerator((IDENTITY_BLOCK,) * 3, sigma, d).matrix()
        blocks = [None] * 3
        blocks[i] = _complete(tuple(x / d[0] for x in _blocks(u)[i]))
        blocks[sigma[1]] = _complete(tuple(x / d[1] for x in _blocks(v)[sigma[1]]))
        blocks[sigma[2]] = _complete(tuple(x / d[2] for x in _blocks(v)[sigma[2]]))
        return _block_matrix(blocks) @ P
    if label is OrbitLabel.O3:
        p1 = _blocks(meet(line, Vs[0]).rows[0])
        p2 = _blocks(meet(line, Vs[1]).rows[0])
        b, b2 = p1[2], p2[2]
        k = b2[0] / b[0] if b[0] != 0 else b2[1] / b[1]
        return _block_matrix(
            [_complete((p2[0][0] / k, p2[0][1] / k)), _complete(p1[1]), _complete(b)]
        )
    # O4: move a point of the line off V to the base point, then use the unipotent blocks
    p, q = line.rows
    for c in itertools.count():
        y = tuple(a + c * b for a, b in zip(q, p)) if c else p
        if all(blk != (0, 0) for blk in _blocks(y)):
            break
    R1 = _normal_off_V(y)
    w = inverse(R1).apply(q if c == 0 else p)
    # membership forces the odd coordinates of w to be proportional to (1, -2, 1)
    q0 = tuple(x / w[1] for x in w)
    return R1 @ _block_matrix(o4_unipotent_blocks(q0))


def transport_line(s: SectionSpace, x: SectionPoint, x2: SectionPoint) -> ProjectiveMap:
    """Automorphism mapping the line of x onto the line of x2 (same orbit required)."""
    _require_even(s)
    label, label2 = classify_orbit(s, x), classify_orbit(s, x2)
    if label is not label2:
        raise GeometryError(f"points lie in different orbits ({label} and {label2})")
    Ti = _frame(s)[1]
    normal = [span(*[Ti.apply(r) for r in pt.line.rows]) for pt in (x, x2)]
    R1, R2 = (_normal_line_map(ln, label) for ln in normal)
    T = _from_normal(s, R2 @ inverse(R1))
    return _checked(s, T, x.line, x2.line, "transport_line")
