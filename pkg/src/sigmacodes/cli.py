"""Command-line interface: ``sigmacodes <subcommand> ...``.

Exit codes: 0 ok, 2 bad input, 3 unsupported model, 4 empty parameter
domain, 5 enumeration too large, 6 duplicate codeword, 7 violated bound.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, codes, curve, zeta
from .gf import FieldError
from .rrspace import TooLarge

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MODEL = 3
EXIT_DOMAIN = 4
EXIT_SIZE = 5
EXIT_DUPLICATE = 6
EXIT_VIOLATION = 7


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _describe_place(model: curve.CurveModel, place: curve.Place) -> str:
    parts = [f"deg={place.degree}"]
    if place.infinite:
        parts.append("inf")
        if place.y is not None:
            parts.append(f"branch={place.y}")
    else:
        parts.append(f"x={place.x}")
        if place.y is not None:
            parts.append(f"y={place.y}")
        if place.degree > 1:
            parts.append("xpoly=" + ",".join(map(str, model.xpoly(place))))
    if model.ramification(place) > 1:
        parts.append("ramified")
    return " ".join(parts)


def cmd_places(args) -> int:
    model = curve.parse_curve(args.curve, args.q)
    r = args.degree
    if model.counting_only:
        n = curve.point_count(model, r)
        print(f"{model.describe()}")
        print(f"rational points over F_{args.q}^{r}: {n}")
        return EXIT_OK
    places = curve.places_of_degree(model, r)
    print(model.describe())
    print(f"places of degree {r}: {len(places)}")
    for i, pl in enumerate(places, 1):
        print(f"  {i:>3}  {_describe_place(model, pl)}")
    return EXIT_OK


def _lpoly_from_args(args) -> zeta.LPolynomial:
    fam = args.family
    if fam == "rational":
        return zeta.lpoly_rational(args.q)
    if fam == "elliptic":
        if args.N is None:
            raise CliError("--family elliptic needs --N", EXIT_PARSE)
        return zeta.lpoly_elliptic(args.q, args.N)
    if fam == "maximal":
        if args.g is None:
            raise CliError("--family maximal needs --g", EXIT_PARSE)
        return zeta.lpoly_maximal(args.q, args.g)
    if not args.coeffs:
        raise CliError("--family custom needs --coeffs", EXIT_PARSE)
    try:
        coeffs = [int(c) for c in args.coeffs.split(",")]
    except ValueError:
        raise CliError(f"cannot parse --coeffs {args.coeffs!r}", EXIT_PARSE) from None
    return zeta.lpoly_custom(args.q, coeffs)


def cmd_zeta(args) -> int:
    try:
        table = zeta.effective_counts(_lpoly_from_args(args), args.imax)
    except zeta.ZetaError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    if args.format == "json":
        _emit(table.to_json() + "\n", args.out)
    else:
        lines = [f"q = {table.q}, g = {table.g}"]
        lines.append("L(t) coefficients: " + " ".join(str(a) for a in table.lpoly.coeffs))
        lines.extend(f"A_{i} = {a}" for i, a in enumerate(table.counts))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _zeta_for_bounds(args) -> zeta.ZetaTable:
    if args.zeta_from:
        with open(args.zeta_from) as fh:
            return zeta.ZetaTable.from_json(fh.read())
    if args.g == 0:
        L = zeta.lpoly_rational(args.q)
    elif args.g == 1:
        L = zeta.lpoly_elliptic(args.q, args.N if args.N is not None else bounds.nq1(args.q))
    else:
        L = zeta.lpoly_maximal(args.q, args.g)
    return zeta.effective_counts(L, 4)


def cmd_bounds(args) -> int:
    try:
        table = _zeta_for_bounds(args)
    except (zeta.ZetaError, bounds.BoundsError, OSError, ValueError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    if table.q != args.q or table.g != args.g:
        raise CliError("zeta table does not match --q/--g", EXIT_PARSE)
    try:
        query = bounds.BoundQuery(args.q, args.g, table, args.n, args.d, args.mode)
        best = bounds.optimize(query)
    except bounds.EmptyDomain as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from None
    except bounds.BoundsError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    report = {
        "q": args.q,
        "g": args.g,
        "n": args.n,
        "d": args.d,
        "mode": args.mode,
        "m": best.m,
        "s": best.s,
        "M_lower": best.value,
        "M_lower_3sig": bounds.sci3(best.value, truncate=True),
        "singleton_cap": bounds.singleton_cap(args.q + 1, args.n, args.d),
        "predicates": bounds.comparison_predicates(args.q, args.g, args.n, args.d, table),
    }
    if args.format == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        lines = [
            f"mode {args.mode}: m* = {best.m}, s* = {best.s}",
            f"M >= {best.value} ({report['M_lower_3sig']})",
            f"singleton cap (q+1)^(n-d+1) = {report['singleton_cap']}",
        ]
        for name, pred in report["predicates"].items():
            if name == "lower_bound":
                continue
            lines.append(f"{name}: hypothesis={pred['hypothesis']} conclusion={pred['conclusion']}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    try:
        table = bounds.table_preset(args.preset)
    except bounds.BoundsError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    _emit(bounds.render_table(table, args.format), args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    code = codes.construct(args.curve, args.q, args.m, args.s, args.d_policy)
    codes.write_code(code, args.out)
    meta = code.metadata
    guaranteed = code.n - args.m - 2 * args.s - meta["D_rational_overlap"]
    print(f"wrote {args.out}")
    print(f"n = {code.n}, M = {code.M}, guaranteed d >= {guaranteed}")
    print(f"D = {meta['D']}")
    for deg, count in meta["strata"].items():
        print(f"  deg G = {deg}: {count} functions")
    return EXIT_OK


def cmd_audit(args) -> int:
    code = codes.read_code(args.input)
    report = codes.audit(code, workers=args.workers)
    doc = report.to_dict()
    seconds = doc.pop("seconds")
    if args.format == "json":
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        lines = [
            f"M = {report.M}, n = {report.n}, q = {report.q}",
            f"d_min = {report.d_min}",
            f"size lower bound: {report.size_lower}",
            f"distance lower bound: {report.dist_lower}",
            f"singleton cap: {report.singleton_cap}",
        ]
        lines += [f"FLAG {f}" for f in report.flags]
        lines += [f"note: {x}" for x in report.notes]
        lines.append("PASS" if report.passed else "FAIL")
        _emit("\n".join(lines) + "\n", args.out)
    print(f"distance search: {seconds:.2f} s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigmacodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("places", help="list places of a curve model")
    p.add_argument("--curve", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--degree", type=int, default=1)
    p.set_defaults(func=cmd_places)

    p = sub.add_parser("zeta", help="L-polynomial and effective divisor counts")
    p.add_argument("--family", choices=["rational", "elliptic", "maximal", "custom"], required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--coeffs")
    p.add_argument("--imax", type=int, default=4)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("bounds", help="optimise the size bound for (n, d)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, help="rational places (genus 1; default: the maximum)")
    p.add_argument("--mode", choices=list(bounds.MODES), default="strict")
    p.add_argument("--zeta-from", help="JSON file written by the zeta subcommand")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table", help="reproduce a comparison table")
    p.add_argument("--preset", choices=sorted(bounds.PRESETS), required=True)
    p.add_argument("--format", choices=["md", "csv", "json"], default="md")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("construct", help="build a code and write it as SIGC")
    p.add_argument("--curve", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d-policy", choices=list(codes.POLICIES), default="disjoint")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("audit", help="exact minimum distance and bound checks")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)
    return parser


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, CliError):
        return exc.code
    if isinstance(exc, codes.DuplicateCodeword):
        return EXIT_DUPLICATE
    if isinstance(exc, TooLarge):
        return EXIT_SIZE
    if isinstance(exc, (curve.CurveParseError, codes.CodeFormatError, FieldError, OSError)):
        return EXIT_PARSE
    if isinstance(exc, (curve.UnsupportedModel, curve.UnsupportedDegree, curve.UnsupportedFactor)):
        return EXIT_MODEL
    if isinstance(exc, (codes.ParameterError, codes.NoDisjointSupport, codes.UnsupportedS, bounds.EmptyDomain)):
        return EXIT_DOMAIN
    return EXIT_PARSE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, curve.CurveError, codes.CodeError, TooLarge, FieldError,
            bounds.BoundsError, zeta.ZetaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
