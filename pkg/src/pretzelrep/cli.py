"""Command-line entry point: ``pretzelrep <command> --knot a1,a2,a3 ...``."""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from typing import Sequence

from .boundary_path import boundary_holonomy, holonomy_diagnostics, realize_cover, realize_slope
from .errors import InvalidInput, NumericalError, PretzelError
from .report import analyze, dumps, envelope, sample_path, verify_suite
from .representation import build_representation, trace_report
from .trace_locus import (
    DEFAULT_CONFIG,
    PretzelKnot,
    ToleranceConfig,
    locus_diagnostics,
    locus_invariants_hold,
    solve_locus,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

_VALUE_FLAGS = ("--knot", "--slope")
_SLOPE_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


def parse_slope(text: str) -> tuple[int, int]:
    """``"m/l"`` (or a bare integer) to a reduced pair with ``l > 0``.

    Decimals are rejected so a surgery coefficient is never rounded.

    >>> parse_slope("4/-6")
    (-2, 3)
    >>> parse_slope("-5")
    (-5, 1)
    """
    match = _SLOPE_RE.match(text)
    if not match:
        raise InvalidInput(f"malformed slope {text!r}; expected integers 'm/l'")
    m = int(match.group(1))
    l = int(match.group(2)) if match.group(2) is not None else 1
    if l == 0:
        raise InvalidInput(f"slope {text!r} has zero denominator")
    q = Fraction(m, l)
    return q.numerator, q.denominator


def _knot(text: str) -> PretzelKnot:
    return PretzelKnot.parse(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--knot", required=True, help="odd positive parameters, e.g. 3,3,5")
    common.add_argument("--tol-root", type=float, default=DEFAULT_CONFIG.root_tol, help="bisection relative width")
    common.add_argument(
        "--tol-residual", type=float, default=DEFAULT_CONFIG.residual_tol, help="residual acceptance threshold"
    )
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default="-", help="output file (default stdout)")

    parser = argparse.ArgumentParser(
        prog="pretzelrep",
        description="Elliptic SL(2,R) representation paths of odd pretzel knots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="limits, thresholds and a verification summary")
    p = sub.add_parser("locus", parents=[common], help="solve the trace locus at one r1")
    p.add_argument("--r1", type=float, required=True)
    p = sub.add_parser("slope", parents=[common], help="certify a surgery slope m/l < 1")
    p.add_argument("--slope", required=True, help="integers m/l")
    p = sub.add_parser("cover", parents=[common], help="certify the n-fold cyclic branched cover")
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("path", parents=[common], help="sample the elliptic path")
    p.add_argument("--samples", type=int, default=50)
    p = sub.add_parser("verify", parents=[common], help="run the seeded invariant suite")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _locus_payload(knot: PretzelKnot, args, cfg: ToleranceConfig) -> tuple[dict, dict, dict, bool]:
    point = solve_locus(knot, args.r1, cfg)
    residuals = locus_diagnostics(point)
    ok = locus_invariants_hold(point, cfg)
    result: dict = {"point": point.to_dict(), "invariants_hold": ok}
    if 0.0 < point.T < 4.0:
        result["holonomy"] = {}
        for sign in (1, -1):
            hol = boundary_holonomy(point, sign)
            result["holonomy"]["plus" if sign == 1 else "minus"] = hol.to_dict()
            for key, value in holonomy_diagnostics(point, hol).items():
                if key.endswith("_residual"):
                    residuals[key] = max(residuals.get(key, 0.0), value)
    if point.T != 4.0:
        rep = build_representation(point, 1, cfg, strict=False)
        residuals["relation_residual"] = rep.relation_residual
        residuals.update(trace_report(rep, point))
    return {"r1": args.r1}, result, residuals, ok


def _run(args) -> tuple[str, int]:
    cfg = ToleranceConfig(root_tol=args.tol_root, residual_tol=args.tol_residual)
    knot = _knot(args.knot)
    if args.format == "csv" and args.command != "path":
        raise InvalidInput("--format csv is only valid for the path command")

    if args.command == "analyze":
        rep = analyze(knot, cfg)
        out = envelope("analyze", knot, {}, rep.to_dict(), rep.residual_summary, cfg)
        return dumps(out), EXIT_OK if rep.suite_passed else EXIT_FAILED

    if args.command == "locus":
        query, result, residuals, ok = _locus_payload(knot, args, cfg)
        return dumps(envelope("locus", knot, query, result, residuals, cfg)), EXIT_OK if ok else EXIT_FAILED

    if args.command == "slope":
        m, l = parse_slope(args.slope)
        cert = realize_slope(knot, m, l, cfg)
        query = {"slope": f"{m}/{l}"}
        out = envelope("slope", knot, query, cert.to_dict(), cert.residuals(), cfg)
        return dumps(out), EXIT_OK if cert.passed else EXIT_FAILED

    if args.command == "cover":
        cert = realize_cover(knot, args.n, cfg)
        out = envelope("cover", knot, {"n": args.n}, cert.to_dict(), cert.residuals(), cfg)
        return dumps(out), EXIT_OK if cert.passed else EXIT_FAILED

    if args.command == "path":
        sample = sample_path(knot, args.samples, cfg)
        if args.format == "csv":
            return sample.to_csv(), EXIT_OK
        out = envelope("path", knot, {"samples": args.samples}, sample.to_dict(), {}, cfg)
        return dumps(out), EXIT_OK

    # verify
    suite = verify_suite(knot, args.samples, args.seed, cfg)
    query = {"samples": args.samples, "seed": args.seed}
    out = envelope("verify", knot, query, suite.to_dict(), suite.summary(), cfg)
    return dumps(out), EXIT_OK if suite.passed else EXIT_FAILED


def _bind_values(argv: Sequence[str]) -> list[str]:
    # "--slope -1/2" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token in _VALUE_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = _build_parser().parse_args(_bind_values(argv))
    try:
        text, code = _run(args)
    except InvalidInput as exc:
        print(f"pretzelrep: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, PretzelError) as exc:
        print(f"pretzelrep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
