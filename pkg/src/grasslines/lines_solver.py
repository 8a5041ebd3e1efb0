"""The variety Z_x of lines through a section point x, and its decomposition.

A line of the Plücker ambient through x = [l], l = P(span{p, q}), is a pencil of
lines L_{U,V} with U = span{r p + s q} and V = span{p, q, v}.  It lies on the section
exactly when (r p + s q) A v = (r p + s q) B v = 0, so Z_x is cut out of
P^1 x P(Q^{N+1} / span{p, q}) by two divisors of bidegree (1, 1).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import GeometryError, InvariantViolation
from .exact_algebra import (
    BinaryForm,
    RatMatrix,
    SymQuadForm,
    canonical_projective,
    divexact,
    factor_form,
    gcd_forms,
    kernel,
    quad_rank_and_vertex,
    rank,
    rref,
)
from .projective import random_in, random_vector
from .section_model import OrbitLabel, SectionPoint, SectionSpace, classify_orbit

TOTAL_CLASS = (2, 1)
MAX_REDRAWS = 10
SIGNATURE_SAMPLES = 50


@dataclass(frozen=True)
class ComplementFrame:
    """Complement of W = span{p, q}; frame coordinates t give v(t) = sum t_i c_i."""

    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]
    complement: RatMatrix

    @classmethod
    def pivot(cls, p: Sequence, q: Sequence) -> "ComplementFrame":
        n = len(p)
        _, piv = rref(RatMatrix([p, q]))
        free = [j for j in range(n) if j not in piv]
        rows = [[int(i == j) for i in range(n)] for j in free]
        return cls.custom(p, q, rows)

    @classmethod
    def custom(cls, p: Sequence, q: Sequence, vectors: Sequence[Sequence]) -> "ComplementFrame":
        C = RatMatrix(vectors)
        if rank(RatMatrix([p, q]).vstack(C)) != len(p) or C.nrows != len(p) - 2:
            raise GeometryError("vectors do not complement span{p, q}")
        return cls(tuple(Fraction(x) for x in p), tuple(Fraction(x) for x in q), C)

    @property
    def dim(self) -> int:
        return self.complement.nrows

    def lift(self, t: Sequence) -> tuple[Fraction, ...]:
        return self.complement.vecmul(t)


@dataclass(frozen=True)
class PencilSystem:
    """Equations (r M1 + s M2) t = 0; row 0 comes from A, row 1 from B."""

    M1: RatMatrix
    M2: RatMatrix

    @property
    def size(self) -> int:
        return self.M1.ncols

    @property
    def N(self) -> int:
        return self.size + 1

    def at(self, r, s) -> RatMatrix:
        return self.M1.scale(r) + self.M2.scale(s)

    def row_forms(self, k: int, t: Sequence) -> tuple[Fraction, Fraction]:
        """Coefficients of r and s in equation k at the frame point t."""
        dot = lambda row: sum((a * b for a, b in zip(row, t)), Fraction(0))
        return dot(self.M1.rows[k]), dot(self.M2.rows[k])

    def evaluate(self, r, s, t) -> tuple[Fraction, Fraction]:
        return self.at(r, s).apply(t)

    def minor(self, j: int, k: int) -> BinaryForm:
        a0, a1 = self.M1.rows
        b0, b1 = self.M2.rows
        return BinaryForm.of(
            (
                a0[j] * a1[k] - a0[k] * a1[j],
                a0[j] * b1[k] + b0[j] * a1[k] - a0[k] * b1[j] - b0[k] * a1[j],
                b0[j] * b1[k] - b0[k] * b1[j],
            )
        )

    def minors(self) -> dict[tuple[int, int], BinaryForm]:
        return {jk: self.minor(*jk) for jk in combinations(range(self.size), 2)}

    def stacked_kernel(self) -> RatMatrix:
        return kernel(self.M1.vstack(self.M2))

    def format(self, var: str = "t") -> list[str]:
        out = []
        for k in range(2):
            terms = []
            for j in range(self.size):
                a, b = self.M1[k, j], self.M2[k, j]
                coef = " + ".join(
                    x for x in (f"{a}*r" if a else "", f"{b}*s" if b else "") if x
                )
                if coef:
                    terms.append(f"({coef})*{var}{j}")
            out.append((" + ".join(terms) or "0") + " = 0")
        return out


def build_system(s: SectionSpace, x: SectionPoint, frame: ComplementFrame | None = None):
    if not s.contains(x.line):
        raise GeometryError("point is not on the section")
    if frame is None:
        frame = ComplementFrame.pivot(x.p, x.q)
    C = frame.complement

    def restrict(v):
        return [C.apply(F.vecmul(v)) for F in (s.A, s.B)]

    return frame, PencilSystem(RatMatrix(restrict(frame.p)), RatMatrix(restrict(frame.q)))


# ---------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class ZxComponent:
    kind: str  # vertical | horizontal | residual
    cls: tuple[int, int]
    multiplicity: int = 1
    root: tuple[int, int] | None = None
    factor: BinaryForm | None = None
    subspace: RatMatrix | None = None
    parametrization: tuple[BinaryForm, ...] | None = None
    quadric: SymQuadForm | None = None

    def support_dict(self) -> dict:
        d: dict = {}
        if self.root is not None:
            d["root"] = [str(c) for c in self.root]
        if self.factor is not None:
            d["factor"] = self.factor.to_strings()
        if self.subspace is not None:
            d["subspace"] = self.subspace.to_strings()
        if self.parametrization is not None:
            d["parametrization"] = [f.to_strings() for f in self.parametrization]
        if self.quadric is not None:
            d["quadric"] = self.quadric.matrix.to_strings()
        return d

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "class": list(self.cls),
            "multiplicity": self.multiplicity,
            "support": self.support_dict(),
        }


def _minors_gcd(sys: PencilSystem) -> BinaryForm:
    g = gcd_forms(sys.minors().values())
    if g.is_zero():
        raise InvariantViolation("minors-vanish", "the system has rank at most 1 everywhere")
    return g


def vertical_components(sys: PencilSystem) -> list[ZxComponent]:
    g = _minors_gcd(sys)
    if g.degree == 0:
        return []
    _, factors = factor_form(g)
    out = []
    for fac, mult in factors:
        if fac.degree == 1:
            a, b = fac.coeffs
            root = canonical_projective((-b, a))
            K = kernel(sys.at(*root))
            if K.nrows != sys.size - 1:
                raise InvariantViolation("vertical-fiber", f"fiber over {root} has the wrong dimension")
            out.append(ZxComponent("vertical", (1, 0), mult, root=root, subspace=K))
        else:
            out.append(ZxComponent("vertical", (fac.degree, 0), mult, factor=fac.primitive()))
    out.sort(key=lambda c: (c.factor is not None, c.root or (), c.factor.coeffs if c.factor else ()))
    return out


def horizontal_components(sys: PencilSystem) -> list[ZxComponent]:
    K = sys.stacked_kernel()
    expected = sys.N - 3
    if K.nrows > expected:
        raise InvariantViolation("horizontal-kernel", f"kernel of dimension {K.nrows} exceeds {expected}")
    if K.nrows == expected:
        return [ZxComponent("horizontal", (0, 1), 1, subspace=K)]
    return []


def _residual_curve(sys: PencilSystem, g: BinaryForm) -> ZxComponent | None:
    m = sys.minors()
    cramer = (m[1, 2], -m[0, 2], m[0, 1])
    d = 2 - g.degree
    if d == 0:
        return None
    reduced = tuple(
        BinaryForm.zero(d) if f.is_zero() else divexact(f, g) for f in cramer
    )
    return ZxComponent("residual", (d, 1), 1, parametrization=reduced)


def _random_line_count(sys, verticals, horizontal, rng) -> int:
    """Intersection number of the residual surface with P^1 x (random line of P^3)."""
    n = sys.size
    for _ in range(MAX_REDRAWS):
        u, w = random_vector(rng, n), random_vector(rng, n)
        if rank(RatMatrix([u, w])) < 2:
            continue
        if horizontal is not None and rank(horizontal.vstack(RatMatrix([u, w]))) < horizontal.nrows + 2:
            continue  # the line meets the horizontal support
        U = RatMatrix([sys.M1.apply(u), sys.M1.apply(w)]).T()
        W = RatMatrix([sys.M2.apply(u), sys.M2.apply(w)]).T()
        delta = BinaryForm.of(
            (
                U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0],
                U[0, 0] * W[1, 1] + W[0, 0] * U[1, 1] - U[0, 1] * W[1, 0] - W[0, 1] * U[1, 0],
                W[0, 0] * W[1, 1] - W[0, 1] * W[1, 0],
            )
        )
        if delta.is_zero():
            continue
        try:
            for comp in verticals:
                fac = comp.factor if comp.factor is not None else BinaryForm.root_factor(comp.root)
                delta = divexact(delta, fac**comp.multiplicity)
        except ValueError:
            continue
        if delta.degree == 0:
            return 0
        # the leftover roots must be simple and away from the vertical fibers
        if gcd_forms([delta.d_r(), delta.d_s()]).degree > 0:
            continue
        if any(
            gcd_forms([delta, c.factor or BinaryForm.root_factor(c.root)]).degree > 0 for c in verticals
        ):
            continue
        return delta.degree
    raise GeometryError("no transverse line found for the residual count")


def _random_fiber_count(sys, verticals, horizontal, rng) -> int:
    """Intersection number of the residual surface with {pt} x (random hyperplane)."""
    for _ in range(MAX_REDRAWS):
        r0, s0 = random_vector(rng, 2)
        if any(
            (c.factor or BinaryForm.root_factor(c.root))(r0, s0) == 0 for c in verticals
        ):
            continue
        F = kernel(sys.at(r0, s0))
        if F.nrows != 2:
            continue
        h = random_vector(rng, sys.size)
        c = kernel(RatMatrix([F.apply(h)]))
        if c.nrows != 1:
            continue
        t = F.vecmul(c.rows[0])
        if horizontal is not None and rank(horizontal.vstack(RatMatrix([t]))) == horizontal.nrows:
            return 0
        return 1
    raise GeometryError("no transverse fiber found for the residual count")


def residual_component(
    sys: PencilSystem,
    found: Sequence[ZxComponent],
    rng: random.Random | None = None,
) -> ZxComponent | None:
    if sys.N == 4:
        return _residual_curve(sys, _minors_gcd(sys))
    if sys.N != 5:
        raise GeometryError("residual analysis is implemented for N = 4, 5")
    rng = rng or random.Random(0)
    verticals = [c for c in found if c.kind == "vertical"]
    hs = [c for c in found if c.kind == "horizontal"]
    horizontal = hs[0].subspace if hs else None
    c_P = _random_line_count(sys, verticals, horizontal, rng)
    c_L = _random_fiber_count(sys, verticals, horizontal, rng)
    if (c_P, c_L) == (0, 0):
        return None
    return ZxComponent("residual", (c_P, c_L), 1, quadric=elimination_quadric(sys))


def elimination_quadric(sys: PencilSystem) -> SymQuadForm:
    """det [[M1[0].t, M2[0].t], [M1[1].t, M2[1].t]]: the image of Z_x in P^{N-2}."""
    a0, a1 = sys.M1.rows
    b0, b1 = sys.M2.rows
    return SymQuadForm.from_product(a0, b1) - SymQuadForm.from_product(b0, a1)


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class StructureSignature:
    name: str | None
    data: dict = field(default_factory=dict)


def _fiber_over(sys: PencilSystem, t: Sequence) -> RatMatrix:
    """(r, s) solving the system at the frame point t, as a kernel basis."""
    cols = [sys.row_forms(k, t) for k in range(2)]
    return kernel(RatMatrix(cols))


def jacobian_rank(sys: PencilSystem, r, s, t) -> int:
    rows = []
    for k in range(2):
        a, b = sys.row_forms(k, t)
        rows.append([a, b] + [r * x + s * y for x, y in zip(sys.M1.rows[k], sys.M2.rows[k])])
    return rank(RatMatrix(rows))


def random_zx_points(sys: PencilSystem, rng: random.Random, count: int, avoid: RatMatrix | None = None):
    """Points ((r, s), t) of Z_x with t outside the span of ``avoid``."""
    pts = []
    while len(pts) < count:
        r, s = random_vector(rng, 2)
        F = kernel(sys.at(r, s))
        if F.nrows == 0:
            continue
        t = random_in(F, rng)
        if avoid is not None and avoid.nrows and rank(avoid.vstack(RatMatrix([t]))) == avoid.nrows:
            continue
        pts.append(((r, s), t))
    return pts


def _fail(check: str, message: str):
    raise InvariantViolation(check, message)


def _quadric_signature(sys: PencilSystem, rng: random.Random, label: OrbitLabel) -> StructureSignature:
    Q = elimination_quadric(sys)
    rk, vertex = quad_rank_and_vertex(Q)
    K = sys.stacked_kernel()
    if label is OrbitLabel.O3:
        if rk != 3:
            _fail("quadric-rank", f"expected a cone of rank 3, got rank {rk}")
        o = vertex.rows[0]
        # both equations vanish at o for every (r:s): the vertex fiber is all of P^1
        if any(sys.M1.apply(o)) or any(sys.M2.apply(o)):
            _fail("vertex-fiber", "fiber over the vertex is not the whole P^1")
        avoid = vertex
    else:
        if rk != 4:
            _fail("quadric-rank", f"expected a smooth quadric, got rank {rk}")
        if K.nrows:
            _fail("horizontal-kernel", "smooth quadric case has a common kernel")
        o, avoid = None, None
    for (r, s), t in random_zx_points(sys, rng, SIGNATURE_SAMPLES, avoid):
        if Q(t) != 0:
            _fail("quadric-image", "point of Z_x projects off the quadric")
        fib = _fiber_over(sys, t)
        if fib.nrows != 1:
            _fail("fiber-singleton", f"fiber over {t} has dimension {fib.nrows}")
        if jacobian_rank(sys, r, s, t) != 2:
            _fail("jacobian-rank", f"Z_x singular at {(r, s)}, {t}")
    if label is OrbitLabel.O3:
        return StructureSignature(
            "blowup-of-cone/F2",
            {"quadric_rank": 3, "vertex": [str(c) for c in canonical_projective(o)]},
        )
    return StructureSignature("smooth-quadric", {"quadric_rank": 4})


def _curve_signature(sys: PencilSystem, comps: Sequence[ZxComponent], rng: random.Random) -> StructureSignature:
    res = [c for c in comps if c.kind == "residual"]
    if len(comps) != 1 or not res or res[0].cls != (2, 1):
        _fail("residual-class", "expected a single residual curve of class (2,1)")
    if _minors_gcd(sys).degree != 0:
        _fail("graph", "Cramer parametrization has base points")
    param = res[0].parametrization
    # graph of a morphism P^1 -> P^2 without base points: a smooth rational curve
    for _ in range(SIGNATURE_SAMPLES):
        r, s = random_vector(rng, 2)
        t = [f(r, s) for f in param]
        if not any(t) or any(sys.evaluate(r, s, t)):
            _fail("parametrization", f"parametrization fails at {(r, s)}")
        if jacobian_rank(sys, r, s, t) != 2:
            _fail("jacobian-rank", f"Z_x singular at {(r, s)}")
    return StructureSignature("rational-curve-P1", {"genus": 0, "degree": 2})


def structure_signature(
    s: SectionSpace, x: SectionPoint, report: "ZxReport", rng: random.Random | None = None
) -> StructureSignature:
    rng = rng or random.Random(0)
    sys = report.system
    if s.N == 5 and report.orbit in (OrbitLabel.O3, OrbitLabel.O4):
        return _quadric_signature(sys, rng, report.orbit)
    if s.N == 4 and report.orbit is OrbitLabel.O4:
        return _curve_signature(sys, report.components, rng)
    return StructureSignature(None)


# ---------------------------------------------------------------------------


@dataclass
class ZxReport:
    orbit: OrbitLabel
    frame: ComplementFrame
    system: PencilSystem
    components: list[ZxComponent]
    signature: StructureSignature = field(default_factory=lambda: StructureSignature(None))

    @property
    def total_class(self) -> tuple[int, int]:
        a = sum(c.multiplicity * c.cls[0] for c in self.components)
        b = sum(c.multiplicity * c.cls[1] for c in self.components)
        return a, b

    def of_kind(self, kind: str) -> list[ZxComponent]:
        return [c for c in self.components if c.kind == kind]

    def table(self) -> list[tuple[str, tuple[int, int], int]]:
        return [(c.kind, c.cls, c.multiplicity) for c in self.components]

    def to_dict(self) -> dict:
        return {
            "orbit": str(self.orbit),
            "components": [c.to_dict() for c in self.components],
            "total_class": list(self.total_class),
            "signature": self.signature.name,
            "signature_data": self.signature.data,
            "frame": self.frame.complement.to_strings(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_markdown(self) -> str:
        lines = [f"## Z_x for a point of orbit {self.orbit}", "", "| kind | class | multiplicity |", "|---|---|---|"]
        for c in self.components:
            lines.append(f"| {c.kind} | ({c.cls[0]}, {c.cls[1]}) | {c.multiplicity} |")
        lines.append("")
        lines.append(f"total class: ({self.total_class[0]}, {self.total_class[1]})")
        if self.signature.name:
            lines.append(f"signature: {self.signature.name}")
        return "\n".join(lines) + "\n"


def decompose(
    s: SectionSpace,
    x: SectionPoint,
    rng: random.Random | None = None,
    frame: ComplementFrame | None = None,
    signature: bool = True,
) -> ZxReport:
    rng = rng or random.Random(0)
    orbit = classify_orbit(s, x)
    frame, sys = build_system(s, x, frame)
    comps = vertical_components(sys) + horizontal_components(sys)
    res = residual_component(sys, comps, rng)
    if res is not None:
        comps.append(res)
    report = ZxReport(orbit, frame, sys, comps)
    if report.total_class != TOTAL_CLASS:
        raise InvariantViolation(
            "total-class", f"components add up to {report.total_class}, expected {TOTAL_CLASS}"
        )
    if signature:
        report.signature = structure_signature(s, x, report, rng)
    return report
