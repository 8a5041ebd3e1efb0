"""Command line: grasslines analyze-pencil | zx | verify."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .errors import GeometryError, InvariantViolation, IrrationalRootError, NotGeneralError, NotMemberError
from .exact_algebra import format_form, to_rational
from .lines_solver import decompose
from .pencil import (
    builtin_pencil,
    center_curve_forms,
    exceptional_lines,
    generality_check,
    pencil_from_json,
)
from .section_model import OrbitLabel, SectionSpace, sample_orbit
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_GEOMETRY, EXIT_NOT_MEMBER, EXIT_USAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get("GRASS_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GRASS_SEED must be an integer, got {raw!r}") from None


def _load_pencil(args):
    if args.pencil:
        try:
            with open(args.pencil, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.pencil}: {exc.strerror}") from None
        try:
            return pencil_from_json(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.pencil}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        except GeometryError as exc:
            raise UsageError(f"{args.pencil}: {exc}") from None
    return builtin_pencil(args.space)


def parse_point(text: str) -> tuple[tuple, tuple]:
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError("a point is given as 'p0,p1,...;q0,q1,...'")
    try:
        p, q = (tuple(to_rational(c.strip()) for c in part.split(",")) for part in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coordinate: {exc}") from None
    return p, q


def _emit(obj: dict):
    print(json.dumps(obj, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------


def cmd_analyze_pencil(args) -> int:
    pencil = _load_pencil(args)
    cert = generality_check(pencil)
    out = {"size": pencil.size, "parity": pencil.parity, "general": cert.general}
    if not cert.general:
        out["violation"] = cert.reason
        _emit(out)
        return EXIT_GEOMETRY
    if pencil.parity == "even":
        out["pfaffian"] = cert.pfaffian.to_strings()
        try:
            members = exceptional_lines(pencil)
        except IrrationalRootError as exc:
            out["violation"] = str(exc)
            out["residual"] = exc.residual.to_strings()
            _emit(out)
            return EXIT_GEOMETRY
        out["degenerate_members"] = [
            {"parameter": [str(c) for c in m.parameter], "kernel": m.kernel.basis.to_strings()}
            for m in members
        ]
    else:
        forms = center_curve_forms(pencil)
        out["center_curve"] = [format_form(f, ("lam", "mu")) for f in forms]
        out["center_curve_coefficients"] = [f.to_strings() for f in forms]
    _emit(out)
    return EXIT_OK


def cmd_zx(args) -> int:
    s = SectionSpace(_load_pencil(args))
    rng = random.Random(args.seed)
    if args.point:
        p, q = parse_point(args.point)
        if len(p) != s.N + 1 or len(q) != s.N + 1:
            raise UsageError(f"points need {s.N + 1} coordinates")
        try:
            x = s.point((p, q))
        except NotMemberError as exc:
            print(f"not on the section: pA q = {exc.pairings[0]}, pB q = {exc.pairings[1]}", file=sys.stderr)
            return EXIT_NOT_MEMBER
    else:
        x = sample_orbit(s, OrbitLabel(args.orbit), rng)
    report = decompose(s, x, rng)
    if args.format == "markdown":
        print(f"line: {x}\n")
        print(report.to_markdown(), end="")
    else:
        out = report.to_dict()
        out["line"] = x.line.basis.to_strings()
        _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.trials)
    print(report.to_json(timing=args.timing))
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grasslines", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--pencil", help="pencil JSON file")
        g.add_argument("--space", choices=["g14", "g15"], help="built-in normal form")

    a = sub.add_parser("analyze-pencil", help="generality and degenerate members")
    source(a)
    a.set_defaults(func=cmd_analyze_pencil)

    z = sub.add_parser("zx", help="decompose the variety of lines through a point")
    source(z)
    which = z.add_mutually_exclusive_group(required=True)
    which.add_argument("--point", help="'p0,p1,...;q0,q1,...'")
    which.add_argument("--orbit", choices=[str(o) for o in OrbitLabel])
    z.add_argument("--seed", type=int, default=None)
    z.add_argument("--format", choices=["json", "markdown"], default="json")
    z.set_defaults(func=cmd_zx)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--timing", action="store_true", help="include wall-clock seconds per check")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        if getattr(args, "trials", None) is not None and args.trials < 1:
            raise UsageError("--trials must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotGeneralError, IrrationalRootError) as exc:
        print(f"invalid geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except InvariantViolation as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except GeometryError as exc:
        print(f"invalid geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
