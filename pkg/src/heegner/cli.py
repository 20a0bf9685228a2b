"""Command-line front end: classpoly / search / verify / tables.

JSON goes to stdout (big integers as decimal strings), diagnostics to stderr.
Exit codes: 0 success, 1 ordinary (verify), 2 precision exhaustion, 3 l-bound
exhausted, 4 unverified-large (verify), 64 usage error, 65 supersingular-at-p
precondition, 66 real-j case (h outside j_p(S)).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .classpoly import PrecisionExhaustedError, build_PD, build_Pl
from .intmath import FactorBudget, is_prime
from .modpoly import brandt_table, supersingular_jp_residues
from .quadforms import SEARCH_P, Discriminant, fundamental_unit
from .hauptmodul import jp_arc_interval
from .sssearch import RealJCaseError, SupersingularAtPError, search
from .ssverify import (
    VERIFY_EFFORT_BOUND,
    EffortBoundExceeded,
    Fq2,
    QuadSurd,
    is_supersingular_j,
    reduce_mod,
)

EXIT_OK = 0
EXIT_ORDINARY = 1
EXIT_PRECISION = 2
EXIT_BOUND = 3
EXIT_UNVERIFIED = 4
EXIT_USAGE = 64
EXIT_SUPERSINGULAR_AT_P = 65
EXIT_REAL_J = 66


@dataclass
class Config:
    """Runtime limits; flags override, HEEGNER_BITS overrides the default bits."""

    bits: int | None = None
    ell_bound: int = 500
    factor_budget: int = FactorBudget.rho_iterations
    verify_bound: int = VERIFY_EFFORT_BOUND
    output: str = "json"

    def __post_init__(self):
        if self.ell_bound <= 0 or self.factor_budget <= 0 or self.verify_bound <= 0:
            raise ValueError("bounds must be positive")
        if self.bits is not None and self.bits <= 0:
            raise ValueError("bits must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="heegner", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    cp = sub.add_parser("classpoly", help="construct a class polynomial")
    cp.add_argument("--p", type=int, required=True)
    group = cp.add_mutually_exclusive_group(required=True)
    group.add_argument("--D", type=int)
    group.add_argument("--ell", type=int)
    cp.add_argument("--bits", type=int)
    cp.add_argument("--format", choices=("json", "text"), default="json")

    se = sub.add_parser("search", help="find supersingular primes for a point")
    se.add_argument("--p", type=int, required=True)
    se.add_argument("--h", type=str, required=True, help='rational "n/d"')
    se.add_argument("--avoid", type=str, default="", help="comma-separated primes")
    se.add_argument("--count", type=int, default=1)
    se.add_argument("--ell-bound", type=int, default=500)
    se.add_argument("--bits", type=int)
    se.add_argument("--factor-budget", type=int)
    se.add_argument("--verify-bound", type=int)
    se.add_argument("--format", choices=("json", "text"), default="json")

    ve = sub.add_parser("verify", help="test supersingularity of a j-invariant")
    ve.add_argument("--j", type=str, required=True, help='"(u+v*sqrt(m))/w"')
    ve.add_argument("--q", type=int, required=True)
    ve.add_argument("--verify-bound", type=int)

    ta = sub.add_parser("tables", help="print level data and derived constants")
    ta.add_argument("--p", type=int, required=True)
    ta.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _default_bits() -> int | None:
    env = os.environ.get("HEEGNER_BITS")
    if env:
        try:
            return int(env)
        except ValueError:
            print(f"warning: ignoring invalid HEEGNER_BITS={env!r}", file=sys.stderr)
    return None


def _cmd_classpoly(args) -> int:
    bits = args.bits or _default_bits()
    try:
        if args.D is not None:
            disc = Discriminant.from_D(args.D, args.p)
            poly = build_PD(disc, bits=bits)
        elif args.p in (5, 13):
            poly = build_Pl(args.ell, args.p, bits=bits)
        else:
            poly = build_PD(Discriminant(args.p, args.ell, "-4pl"), bits=bits)
    except PrecisionExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "text":
        print(poly)
    else:
        print(poly.to_json())
    return EXIT_OK


def _cmd_search(args) -> int:
    try:
        num, _, den = args.h.partition("/")
        h = Fraction(int(num), int(den) if den else 1)
        sigma = tuple(int(v) for v in args.avoid.split(",") if v)
        cfg = Config(
            bits=args.bits or _default_bits(),
            ell_bound=args.ell_bound,
            factor_budget=args.factor_budget or FactorBudget.rho_iterations,
            verify_bound=args.verify_bound or VERIFY_EFFORT_BOUND,
            output=args.format,
        )
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        certs = search(
            args.p,
            h,
            sigma=sigma,
            count=args.count,
            ell_bound=cfg.ell_bound,
            bits=cfg.bits,
            budget=FactorBudget(rho_iterations=cfg.factor_budget),
            effort_bound=cfg.verify_bound,
        )
    except SupersingularAtPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUPERSINGULAR_AT_P
    except RealJCaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REAL_J
    except (ValueError, PrecisionExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    found = 0
    for cert in certs:
        found += len(cert.selected)
        if args.format == "text":
            primes = ", ".join(str(q) for q in cert.selected)
            print(f"l = {cert.ell}, D = {cert.D}, P(h) = {cert.value}: primes {primes}")
        else:
            print(cert.to_json())
    if found < args.count:
        print(
            f"l bound {args.ell_bound} exhausted after {found} of {args.count} primes",
            file=sys.stderr,
        )
        return EXIT_BOUND
    return EXIT_OK


def _cmd_verify(args) -> int:
    bound = args.verify_bound or VERIFY_EFFORT_BOUND
    try:
        j = QuadSurd.from_string(args.j)
        if not is_prime(args.q) or args.q == 2:
            raise ValueError(f"q = {args.q} must be an odd prime")
        residues = reduce_mod(j, args.q)
        if isinstance(residues, Fq2):
            verdicts = [is_supersingular_j(residues, args.q, bound)]
        else:
            verdicts = [is_supersingular_j(r, args.q, bound) for r in residues]
    except EffortBoundExceeded:
        print("unverified-large")
        return EXIT_UNVERIFIED
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if len(set(verdicts)) != 1:
        print("error: conjugate residues disagree", file=sys.stderr)
        return EXIT_USAGE
    print("supersingular" if verdicts[0] else "ordinary")
    return EXIT_OK if verdicts[0] else EXIT_ORDINARY


def _cmd_tables(args) -> int:
    p = args.p
    if p not in SEARCH_P + (23,):
        print(f"error: no tables for p = {p}", file=sys.stderr)
        return EXIT_USAGE
    data: dict = {"p": p}
    data["supersingular_jp"] = {
        "values": list(supersingular_jp_residues(p)),
        "provenance": "table" if p in (11, 19) else "derived",
    }
    try:
        t2 = brandt_table(p)
        data["brandt"] = {
            "basis": list(t2.basis),
            "matrix": [list(row) for row in t2.matrix],
            "note": t2.note,
            "provenance": "table",
        }
    except ValueError:
        pass
    if p % 4 == 3 and p != 23:
        c, d = fundamental_unit(p)
        lo, hi = jp_arc_interval(p)
        data["fundamental_unit"] = {"c": c, "d": d, "provenance": "derived"}
        data["arc_interval"] = {"inf": lo, "sup": hi, "provenance": "derived"}
    if p == 23:
        data["note"] = "theorem not proven for p=23"
    if args.format == "text":
        for key, value in data.items():
            print(f"{key}: {value}")
    else:
        print(json.dumps(data))
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "classpoly": _cmd_classpoly,
        "search": _cmd_search,
        "verify": _cmd_verify,
        "tables": _cmd_tables,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
