"""Verification suites shared by the command line and the acceptance tests."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from .aut_group import is_automorphism, sample_automorphism, transport_line
from .errors import GeometryError, InvariantViolation
from .exact_algebra import RatMatrix, canonical_projective, inverse, quad_rank_and_vertex
from .fano_check import corollary_check
from .lines_solver import ComplementFrame, build_system, decompose, elimination_quadric
from .pencil import (
    AntisymPencil,
    EQ2_A,
    EQ2_B,
    center_curve_point,
    exceptional_lines,
    g14_pencil,
    g15_pencil,
    normalize_even,
)
from .projective import random_in, random_vector, span
from .section_model import (
    OrbitLabel,
    SectionSpace,
    check_meets_all_V,
    classify_orbit,
    sample_member,
    sample_member_through,
    sample_orbit,
)


def _e(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


# standard representatives of the four orbits (0-based coordinates)
ODD_REPRESENTATIVES = {
    OrbitLabel.O1: (_e(5, 2), _e(5, 3)),
    OrbitLabel.O2: (_e(5, 2), _e(5, 4)),
    OrbitLabel.O3: (_e(5, 2), _e(5, 1)),
    OrbitLabel.O4: ((1, 0, 0, 0, 1), (0, 1, 0, 1, 0)),
}
EVEN_REPRESENTATIVES = {
    OrbitLabel.O1: (_e(6, 0), _e(6, 2)),
    OrbitLabel.O2: (_e(6, 0), (0, 0, 1, 0, 1, 0)),
    OrbitLabel.O3: ((0, 0, 1, 0, 1, 0), (1, 0, 0, 0, 1, 0)),
    OrbitLabel.O4: ((1, 0, 1, 0, 1, 0), (0, 1, 0, -2, 0, 1)),
}

V, H, R = "vertical", "horizontal", "residual"
ODD_TABLES = {
    OrbitLabel.O1: [(V, (1, 0), 2), (H, (0, 1), 1)],
    OrbitLabel.O2: [(V, (1, 0), 1), (V, (1, 0), 1), (H, (0, 1), 1)],
    OrbitLabel.O3: [(V, (1, 0), 1), (R, (1, 1), 1)],
    OrbitLabel.O4: [(R, (2, 1), 1)],
}
EVEN_TABLES = {
    OrbitLabel.O1: [(V, (1, 0), 1), (V, (1, 0), 1), (H, (0, 1), 1)],
    OrbitLabel.O2: [(V, (1, 0), 1), (R, (1, 1), 1)],
    OrbitLabel.O3: [(R, (2, 1), 1)],
    OrbitLabel.O4: [(R, (2, 1), 1)],
}
# complement of span{p, q} in which the cone of the third even orbit has vertex (1:0:0:0)
CONE_FRAME = [_e(6, 0), _e(6, 1), _e(6, 3), _e(6, 5)]


@dataclass
class CheckRecord:
    id: str
    passed: bool
    witness: dict = field(default_factory=dict)
    seconds: float | None = None

    def to_dict(self, timing: bool) -> dict:
        d = {"id": self.id, "status": "pass" if self.passed else "fail", "witness": self.witness}
        if timing and self.seconds is not None:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class VerificationReport:
    suite: str
    seed: int
    checks: list[CheckRecord] = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "version": self.version,
            "passed": self.passed,
            "checks": [c.to_dict(timing) for c in sorted(self.checks, key=lambda c: c.id)],
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _run(report: VerificationReport, cid: str, fn: Callable[[], dict]):
    t = time.perf_counter()
    try:
        witness = fn()
        ok = witness.pop("ok", True)
    except (InvariantViolation, GeometryError, AssertionError) as exc:
        ok, witness = False, {"error": f"{type(exc).__name__}: {exc}"}
    report.checks.append(CheckRecord(cid, bool(ok), witness, time.perf_counter() - t))


# ---------------------------------------------------------------------------
# individual checks


def check_representative_tables(parity: str) -> dict:
    s = SectionSpace(g14_pencil() if parity == "odd" else g15_pencil())
    reps = ODD_REPRESENTATIVES if parity == "odd" else EVEN_REPRESENTATIVES
    tables = ODD_TABLES if parity == "odd" else EVEN_TABLES
    got, ok = {}, True
    for label, (p, q) in reps.items():
        report = decompose(s, s.point((p, q)))
        ok &= report.orbit is label and report.table() == tables[label]
        got[str(label)] = {
            "components": [[k, list(c), m] for k, c, m in report.table()],
            "signature": report.signature.name,
        }
    if parity == "odd":
        ok &= got["o4"]["signature"] == "rational-curve-P1"
    else:
        ok &= got["o3"]["signature"] == "blowup-of-cone/F2"
        ok &= got["o4"]["signature"] == "smooth-quadric"
        p, q = EVEN_REPRESENTATIVES[OrbitLabel.O3]
        frame = ComplementFrame.custom(p, q, CONE_FRAME)
        _, sys = build_system(s, s.point((p, q)), frame)
        rk, vertex = quad_rank_and_vertex(elimination_quadric(sys))
        vtx = canonical_projective(vertex.rows[0])
        ok &= rk == 3 and vtx == (1, 0, 0, 0)
        got["cone_vertex"] = [str(v) for v in vtx]
    return {"ok": ok, "tables": got}


def check_class_conservation(parity: str, trials: int, rng: random.Random) -> dict:
    s = SectionSpace(g14_pencil() if parity == "odd" else g15_pencil())
    counts = {str(k): 0 for k in OrbitLabel}
    for i in range(trials):
        label = list(OrbitLabel)[i % 4]
        x = sample_orbit(s, label, rng)
        rep = decompose(s, x, rng, signature=False)
        if rep.total_class != (2, 1):
            return {"ok": False, "line": str(x), "total_class": list(rep.total_class)}
        counts[str(label)] += 1
    return {"per_orbit": counts}


def check_orbit_invariance(parity: str, trials: int, rng: random.Random) -> dict:
    s = SectionSpace(g14_pencil() if parity == "odd" else g15_pencil())
    for _ in range(trials):
        g = sample_automorphism(s, rng)
        x = sample_member(s, rng)
        a, b = classify_orbit(s, x), classify_orbit(s, g.apply_line(x))
        if a is not b:
            return {"ok": False, "line": str(x), "before": str(a), "after": str(b)}
    return {"pairs": trials}


def check_V_incidence(trials: int, rng: random.Random) -> dict:
    s = SectionSpace(g15_pencil())
    met = 0
    for _ in range(trials):
        j = rng.randrange(3)
        a, b = [li for i, li in enumerate(s.lines) if i != j]
        p = tuple(x + y for x, y in zip(random_in(a, rng), random_in(b, rng)))
        x = sample_member_through(s, p, rng)
        if not check_meets_all_V(s, x):
            return {"ok": False, "line": str(x)}
        met += 1
    return {"members": met}


def check_plane_meets_on_conic(trials: int, rng: random.Random) -> dict:
    """Lines through random points of P, half of them through points of the conic."""
    s = SectionSpace(g14_pencil())
    single = 0
    for i in range(trials):
        if i % 2:
            p = s.conic.point(*random_vector(rng, 2))
        else:
            p = random_in(s.plane, rng)
        x = sample_member_through(s, p, rng)
        label = classify_orbit(s, x)  # raises if the line meets P off the conic
        single += label is OrbitLabel.O3
    return {"members": trials, "meeting_in_one_point": single}


def check_corollary(rng: random.Random) -> dict:
    out, ok = {}, True
    for pencil, expected in ((g14_pencil(), Fraction(-1, 2)), (g15_pencil(), Fraction(-1))):
        res = corollary_check(SectionSpace(pencil), rng)
        ok &= res.value == expected and (res.counts.sigma2, res.counts.sigma11) == (0, 1)
        out[f"N={res.N}"] = {
            "counts": [res.counts.sigma2, res.counts.sigma11],
            "class": [str(k) for k in res.surface_class],
            "ch2": str(res.value),
        }
    return {"ok": ok, **out}


def random_invertible(rng: random.Random, n: int, bound: int = 3) -> RatMatrix:
    while True:
        T = RatMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        try:
            inverse(T)
            return T
        except ZeroDivisionError:
            continue


def check_pencil(trials: int, rng: random.Random) -> dict:
    even = g15_pencil()
    members = exceptional_lines(even)
    roots = [m.parameter for m in members]
    kernels = [[list(map(str, r)) for r in m.kernel.rows] for m in members]
    ok = roots == [(1, 1), (0, 1), (1, -1)] and all(
        m.kernel == span(_e(6, 2 * i), _e(6, 2 * i + 1)) for i, m in enumerate(members)
    )
    odd = g14_pencil()
    for _ in range(10):
        lam, mu = random_vector(rng, 2)
        c = center_curve_point(odd, (lam, mu))
        ok &= c.coords == canonical_projective((0, 0, mu * mu, mu * lam, lam * lam))
    for _ in range(trials):
        T = random_invertible(rng, 6)
        M = random_invertible(rng, 2)
        A2 = T.T() @ (EQ2_A.scale(M[0, 0]) + EQ2_B.scale(M[0, 1])) @ T
        B2 = T.T() @ (EQ2_A.scale(M[1, 0]) + EQ2_B.scale(M[1, 1])) @ T
        norm = normalize_even(AntisymPencil(A2, B2))
        ok &= norm.pencil.A == EQ2_A and norm.pencil.B == EQ2_B
    return {"ok": ok, "roots": [list(r) for r in roots], "kernels": kernels, "round_trips": trials}


def check_transport(trials: int, rng: random.Random) -> dict:
    s = SectionSpace(g15_pencil())
    for i in range(trials):
        label = list(OrbitLabel)[i % 4]
        x, x2 = sample_orbit(s, label, rng), sample_orbit(s, label, rng)
        T = transport_line(s, x, x2)
        if not (is_automorphism(s, T) and T.apply_line(x) == x2.line):
            return {"ok": False, "orbit": str(label), "source": str(x), "target": str(x2)}
    return {"pairs": trials}


# ---------------------------------------------------------------------------

SUITES = ("pencil", "thm1", "thm2", "classes", "orbits", "lemma25", "transport", "corollary")


def run_suite(name: str, seed: int = 0, trials: int | None = None) -> VerificationReport:
    names = SUITES if name == "all" else (name,)
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    report = VerificationReport(name, seed)
    for n in names:
        rng = _rng(seed, n)
        if n == "pencil":
            _run(report, "pencil", lambda: check_pencil(trials or 100, rng))
        elif n == "thm1":
            _run(report, "thm1", lambda: check_representative_tables("odd"))
        elif n == "thm2":
            _run(report, "thm2", lambda: check_representative_tables("even"))
        elif n == "classes":
            _run(report, "classes.odd", lambda: check_class_conservation("odd", trials or 200, rng))
            _run(report, "classes.even", lambda: check_class_conservation("even", trials or 200, rng))
        elif n == "orbits":
            _run(report, "orbits.odd", lambda: check_orbit_invariance("odd", trials or 500, rng))
            _run(report, "orbits.even", lambda: check_orbit_invariance("even", trials or 500, rng))
        elif n == "lemma25":
            _run(report, "lemma25.even", lambda: check_V_incidence(trials or 500, rng))
            _run(report, "lemma25.odd", lambda: check_plane_meets_on_conic(trials or 500, rng))
        elif n == "transport":
            _run(report, "transport", lambda: check_transport(trials or 100, rng))
        elif n == "corollary":
            _run(report, "corollary", lambda: check_corollary(rng))
    return report
