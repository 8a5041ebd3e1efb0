"""Exact rational linear algebra and homogeneous binary forms.

Everything here works over :class:`fractions.Fraction`.  Matrices and forms
are immutable; all operations return new objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def canonical_projective(vec: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero positive."""
    vals = [to_rational(v) for v in vec]
    if all(v == 0 for v in vals):
        raise ValueError("zero vector has no projective class")
    den = reduce(lcm, (v.denominator for v in vals), 1)
    ints = [int(v * den) for v in vals]
    g = reduce(gcd, ints, 0)
    ints = [i // g for i in ints]
    first = next(i for i in ints if i != 0)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(ints)


def proportional(u: Sequence, v: Sequence) -> bool:
    """True if u and v are nonzero multiples of each other."""
    return canonical_projective(u) == canonical_projective(v)


class RatMatrix:
    """Immutable dense matrix of Fractions (row-major)."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(to_rational(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "RatMatrix":
        m = object.__new__(cls)
        m.rows = rows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        z = Fraction(0)
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._raw(
            tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def block_diag(cls, *blocks: "RatMatrix") -> "RatMatrix":
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        out = [[Fraction(0)] * m for _ in range(n)]
        i0 = j0 = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                out[i0 + i][j0 : j0 + b.ncols] = row
            i0 += b.nrows
            j0 += b.ncols
        return cls._raw(tuple(tuple(r) for r in out), m)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"RatMatrix([{body}])"

    def T(self) -> "RatMatrix":
        if not self.rows:
            return RatMatrix._raw((), 0) if self.ncols == 0 else RatMatrix.zeros(self.ncols, 0)
        return RatMatrix._raw(tuple(zip(*self.rows)), len(self.rows))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> "RatMatrix":
        c = to_rational(c)
        return RatMatrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return RatMatrix._raw(
            tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.rows),
            other.ncols,
        )

    def vecmul(self, v: Sequence) -> tuple[Fraction, ...]:
        """Row vector times matrix: v @ self."""
        if len(v) != self.nrows:
            raise ValueError("length mismatch")
        out = [Fraction(0)] * self.ncols
        for vi, row in zip(v, self.rows):
            if vi:
                for j, a in enumerate(row):
                    if a:
                        out[j] += vi * a
        return tuple(out)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector: self @ v."""
        if len(v) != self.ncols:
            raise ValueError("length mismatch")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.rows)

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return RatMatrix._raw(self.rows + other.rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_antisymmetric(self) -> bool:
        n = self.nrows
        return n == self.ncols and all(
            self.rows[i][j] == -self.rows[j][i] for i in range(n) for j in range(i, n)
        )

    def flatten(self) -> tuple[Fraction, ...]:
        return tuple(a for r in self.rows for a in r)

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]


def rref(M: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and the (strictly increasing) pivot columns."""
    rows = [list(r) for r in M.rows]
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            f = rows[i][c]
            if i != r and f != 0:
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return RatMatrix._raw(tuple(tuple(x) for x in rows), ncols), tuple(pivots)


def rank(M: RatMatrix) -> int:
    return len(rref(M)[1])


def row_basis(M: RatMatrix) -> RatMatrix:
    """The nonzero rows of rref(M): a canonical basis of the row space."""
    R, piv = rref(M)
    return RatMatrix._raw(R.rows[: len(piv)], M.ncols)


def kernel(M: RatMatrix) -> RatMatrix:
    """Rows spanning {v : M v^T = 0}, one per free column."""
    R, piv = rref(M)
    n = M.ncols
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R.rows[i][f]
        basis.append(tuple(v))
    return RatMatrix._raw(tuple(basis), n)


def det(M: RatMatrix) -> Fraction:
    n, m = M.shape
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in M.rows]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return d


def inverse(M: RatMatrix) -> RatMatrix:
    n, m = M.shape
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    aug = RatMatrix._raw(
        tuple(r + tuple(Fraction(int(i == j)) for j in range(n)) for i, r in enumerate(M.rows)), 2 * n
    )
    R, piv = rref(aug)
    if piv[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix._raw(tuple(r[n:] for r in R.rows), n)


def solve_left(v: Sequence, B: RatMatrix) -> tuple[Fraction, ...]:
    """Coefficients c with c @ B == v; B must have independent rows spanning v."""
    Bt = B.T()
    rows = [r + (to_rational(x),) for r, x in zip(Bt.rows, v)]
    R, piv = rref(RatMatrix(rows, B.nrows + 1))
    if B.nrows in piv:
        raise ValueError("vector not in the row space")
    c = [Fraction(0)] * B.nrows
    for i, p in enumerate(piv):
        c[p] = R.rows[i][-1]
    return tuple(c)


def _pfaffian_generic(entries, n, zero, one):
    def rec(idx):
        if not idx:
            return one
        first = idx[0]
        total = zero
        for k in range(1, len(idx)):
            a = entries[first][idx[k]]
            if _is_zero(a):
                continue
            rest = idx[1:k] + idx[k + 1 :]
            term = a * rec(rest)
            total = total + term if k % 2 == 1 else total - term
        return total

    return rec(tuple(range(n)))


def _is_zero(a) -> bool:
    if isinstance(a, BinaryForm):
        return a.is_zero()
    return a == 0


def pfaffian(M: RatMatrix) -> Fraction:
    """Pfaffian by cofactor expansion along the first row."""
    n = M.nrows
    if n % 2 or not M.is_antisymmetric():
        raise ValueError("pfaffian requires even antisymmetric")
    return _pfaffian_generic(M.rows, n, Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# Binary forms


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form sum c_i r^(d-i) s^i in two variables."""

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(to_rational(c) for c in self.coeffs)
        if len(coeffs) != self.degree + 1:
            raise ValueError("a degree-d form has d+1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def of(cls, coeffs: Sequence) -> "BinaryForm":
        return cls(len(coeffs) - 1, tuple(coeffs))

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(degree, (0,) * (degree + 1))

    @classmethod
    def constant(cls, c=1) -> "BinaryForm":
        return cls(0, (c,))

    @classmethod
    def linear(cls, a, b) -> "BinaryForm":
        """The form a*r + b*s."""
        return cls(1, (a, b))

    @classmethod
    def root_factor(cls, root: Sequence) -> "BinaryForm":
        """Linear form vanishing at the projective point (r0 : s0)."""
        r0, s0 = root
        return cls(1, (s0, -r0))

    def __call__(self, r, s) -> Fraction:
        r, s = to_rational(r), to_rational(s)
        d = self.degree
        return sum((c * r ** (d - i) * s**i for i, c in enumerate(self.coeffs) if c), Fraction(0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.is_zero() and other.degree != self.degree:
            return self
        if self.is_zero() and other.degree != self.degree:
            return other
        if self.degree != other.degree:
            raise ValueError("adding forms of different degrees")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other) -> "BinaryForm":
        if not isinstance(other, BinaryForm):
            c = to_rational(other)
            return BinaryForm(self.degree, tuple(c * a for a in self.coeffs))
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BinaryForm":
        out = BinaryForm.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def leading(self) -> Fraction:
        return next((c for c in self.coeffs if c != 0), Fraction(0))

    def normalized(self) -> "BinaryForm":
        lead = self.leading()
        return self if lead == 0 else self * (1 / lead)

    def primitive(self) -> "BinaryForm":
        """Integer coefficients with content 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        return BinaryForm(self.degree, canonical_projective(self.coeffs))

    def s_order(self) -> int:
        """Multiplicity of the root (1:0), i.e. the power of s dividing the form."""
        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def d_r(self) -> "BinaryForm":
        d = self.degree
        if d == 0:
            return BinaryForm.zero(0)
        return BinaryForm(d - 1, tuple((d - i) * c for i, c in enumerate(self.coeffs[:-1])))

    def d_s(self) -> "BinaryForm":
        d = self.degree
        if d == 0:
            return BinaryForm.zero(0)
        return BinaryForm(d - 1, tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def order_at(self, root: Sequence) -> int:
        """Vanishing order at a rational projective point."""
        if self.is_zero():
            raise ValueError("zero form vanishes to infinite order")
        lin = BinaryForm.root_factor(root)
        k, f = 0, self
        while True:
            q, rem = _divmod_forms(f, lin)
            if rem:
                return k
            f, k = q, k + 1

    def __str__(self):
        return format_form(self)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def format_form(f: BinaryForm, vars: tuple[str, str] = ("r", "s")) -> str:
    r, s = vars
    d = f.degree
    terms = []
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        mono = "*".join(
            p for p in ((r if d - i == 1 else f"{r}^{d - i}") if d - i else "", (s if i == 1 else f"{s}^{i}") if i else "") if p
        )
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# univariate helpers on descending coefficient lists (x = r/s)


def _strip(p):
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return list(p[i:])


def _pdivmod(a, b):
    a, b = _strip(a), _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    a = list(a)
    lead = b[0]
    for i in range(len(q)):
        c = a[i] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    rem = _strip(a[len(q) :]) if q else _strip(a)
    return q, rem


def _pgcd(a, b):
    a, b = _strip(a), _strip(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [c / a[0] for c in a]


def binary_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Greatest common divisor, normalized to leading nonzero coefficient 1."""
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    af, ag = f.s_order(), g.s_order()
    h = _pgcd(f.coeffs[af:], g.coeffs[ag:])
    m = min(af, ag)
    coeffs = [Fraction(0)] * m + h
    return BinaryForm(len(coeffs) - 1, tuple(coeffs))


def gcd_forms(forms: Iterable[BinaryForm]) -> BinaryForm:
    return reduce(binary_gcd, forms, BinaryForm.zero(0))


def _divmod_forms(f: BinaryForm, g: BinaryForm) -> tuple[BinaryForm, bool]:
    """Quotient of f by g and whether a nonzero remainder was left."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero form")
    dq = f.degree - g.degree
    if f.is_zero():
        return BinaryForm.zero(max(dq, 0)), False
    if dq < 0:
        return BinaryForm.zero(0), True
    q, rem = _pdivmod(f.coeffs, g.coeffs[g.s_order() :])
    q = _strip(q)
    # s-part of g must divide f as well
    coeffs = [Fraction(0)] * (dq - len(q) + 1) + q if q else [Fraction(0)] * (dq + 1)
    if len(coeffs) != dq + 1:
        return BinaryForm.zero(dq), True
    h = BinaryForm(dq, tuple(coeffs))
    return h, bool(rem) or (h * g) != f


def divexact(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    q, rem = _divmod_forms(f, g)
    if rem:
        raise ValueError(f"{g} does not divide {f}")
    return q


def factor_form(f: BinaryForm) -> tuple[Fraction, list[tuple[BinaryForm, int]]]:
    """Factor over Q into a constant times normalized irreducible forms with multiplicities."""
    from sympy import Poly, QQ, symbols

    if f.is_zero():
        raise ValueError("cannot factor the zero form")
    factors: list[tuple[BinaryForm, int]] = []
    a = f.s_order()
    if a:
        factors.append((BinaryForm.linear(0, 1), a))
    rest = f.coeffs[a:]
    const = rest[0]
    if len(rest) > 1:
        x = symbols("x")
        poly = Poly([c for c in rest], x, domain=QQ)
        c, fl = poly.factor_list()
        const = Fraction(int(c.numerator), int(c.denominator))
        for fac, mult in fl:
            cs = [Fraction(int(v.numerator), int(v.denominator)) for v in fac.all_coeffs()]
            form = BinaryForm.of(cs)
            lead = form.leading()
            const *= lead**mult
            factors.append((form.normalized(), mult))
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return const, factors


def rational_roots(f: BinaryForm) -> tuple[list[tuple[tuple[int, int], int]], BinaryForm]:
    """Rational projective roots with multiplicities, plus the normalized residual form."""
    if f.is_zero():
        raise ValueError("rational_roots of the zero form")
    _, factors = factor_form(f)
    roots = []
    residual = BinaryForm.constant(1)
    for fac, mult in factors:
        if fac.degree == 1:
            a, b = fac.coeffs
            roots.append((canonical_projective((-b, a)), mult))
        else:
            residual = residual * fac**mult
    roots.sort()
    return roots, residual.normalized()


def pfaffian_form(A: RatMatrix, B: RatMatrix) -> BinaryForm:
    """Pf(lam*A - mu*B) as a form of degree n in (lam, mu)."""
    n = A.nrows
    if n % 2 or A.shape != B.shape or not A.is_antisymmetric() or not B.is_antisymmetric():
        raise ValueError("pfaffian requires even antisymmetric")
    return _pfaffian_generic(symbolic_pencil(A, B), n, BinaryForm.zero(0), BinaryForm.constant(1))


def symbolic_pencil(A: RatMatrix, B: RatMatrix) -> list[list[BinaryForm]]:
    """Entries of lam*A - mu*B as linear forms."""
    return [[BinaryForm.linear(a, -b) for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)]


def principal_subpfaffians(A: RatMatrix, B: RatMatrix, size: int) -> list[BinaryForm]:
    """Pfaffians of all principal size x size submatrices of lam*A - mu*B."""
    from itertools import combinations

    ent = symbolic_pencil(A, B)
    out = []
    for idx in combinations(range(A.nrows), size):
        sub = [[ent[i][j] for j in idx] for i in idx]
        out.append(_pfaffian_generic(sub, size, BinaryForm.zero(0), BinaryForm.constant(1)))
    return out


# ---------------------------------------------------------------------------
# Quadratic forms


@dataclass(frozen=True)
class SymQuadForm:
    matrix: RatMatrix

    def __post_init__(self):
        M = self.matrix
        if M.nrows != M.ncols or M != M.T():
            raise ValueError("quadratic form matrix must be symmetric")

    @property
    def dimension(self) -> int:
        return self.matrix.nrows

    @classmethod
    def from_monomials(cls, m: int, terms: dict) -> "SymQuadForm":
        """Build from {(i, j): coefficient of t_i t_j}."""
        Q = [[Fraction(0)] * m for _ in range(m)]
        for (i, j), c in terms.items():
            c = to_rational(c)
            if i == j:
                Q[i][i] += c
            else:
                Q[i][j] += c / 2
                Q[j][i] += c / 2
        return cls(RatMatrix(Q))

    @classmethod
    def from_product(cls, a: Sequence, b: Sequence) -> "SymQuadForm":
        """The form (a.t)(b.t)."""
        m = len(a)
        return cls(
            RatMatrix([[(to_rational(a[i]) * b[j] + to_rational(a[j]) * b[i]) / 2 for j in range(m)] for i in range(m)])
        )

    def __add__(self, other):
        return SymQuadForm(self.matrix + other.matrix)

    def __sub__(self, other):
        return SymQuadForm(self.matrix - other.matrix)

    def __call__(self, v: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.matrix.vecmul(v), v)), Fraction(0))

    def monomials(self) -> dict:
        M = self.matrix
        out = {}
        for i in range(M.nrows):
            if M[i, i]:
                out[(i, i)] = M[i, i]
            for j in range(i + 1, M.nrows):
                if M[i, j]:
                    out[(i, j)] = 2 * M[i, j]
        return out

    def proportional_to(self, other: "SymQuadForm") -> bool:
        a, b = self.matrix.flatten(), other.matrix.flatten()
        if all(x == 0 for x in a) or all(x == 0 for x in b):
            return all(x == 0 for x in a) and all(x == 0 for x in b)
        return proportional(a, b)

    def __str__(self):
        parts = []
        for (i, j), c in sorted(self.monomials().items()):
            mono = f"t{i}^2" if i == j else f"t{i}*t{j}"
            parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def quad_rank_and_vertex(Q: SymQuadForm) -> tuple[int, RatMatrix]:
    return rank(Q.matrix), kernel(Q.matrix)
