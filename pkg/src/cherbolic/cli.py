"""Command-line front end.

    cherbolic list [--family sporadic|thompson|NAME]
    cherbolic word GROUP P WORD [--json]
    cherbolic verify CASE P|all [--json [PATH]]
    cherbolic verify all [--json [PATH]]
    cherbolic polygon CASE P [--json PATH] [--svg PATH] [--png PATH]

Exit status: 0 when everything reported passes, 1 when a verdict fails,
2 for usage and catalog errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import Tolerances, default_tolerances
from .domains import CASES, CaseId, all_cases, poincare_verify
from .errors import CherbolicError, NonCatalogParameter
from .groups import FAMILIES, family
from .isometry import classify_isometry, projective_order
from .report import Summary, case_report, dumps, failure_report, polygon_document
from .words import SPORADIC, THOMPSON

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _tolerances(args) -> Tolerances:
    return default_tolerances().with_overrides(
        algebraic=args.tol_alg, angular=args.tol_angle, zero=args.tol_zero, max_order=args.max_order
    )


def _group_for(name: str, p: int, tol: Tolerances):
    """A family name (tau1, S2, ...) or a polygon case name (e2_l3, ...)."""
    key = name.lower()
    if key in CASES:
        return CaseId(key, p).group(tol)
    return family(key).build(p, tol)


def _parse_p(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"p must be an integer, got {text!r}") from None


# -- commands ------------------------------------------------------------------------


def cmd_list(args, tol: Tolerances) -> int:
    selected = args.family.lower() if args.family else None
    rows = []
    for f in FAMILIES.values():
        if selected in (None, f.kind, f.name.lower()):
            rows.append((f.kind, f.name.lower(), f.lattice_p, f.has_presentation))
    if not rows:
        print(f"no family matches {args.family!r}", file=sys.stderr)
        return EXIT_ERROR
    print("families:")
    for kind, name, ps, checked in sorted(rows):
        note = "" if checked else "  (group only)"
        print(f"  {name}: p = {','.join(map(str, ps))}  [{kind}]{note}")
    names = {r[1] for r in rows}
    cases = sorted((c for c in CASES.values() if c.family.lower() in names), key=lambda c: c.name)
    if cases:
        print("polygon cases:")
        for c in cases:
            print(f"  {c.name}: p = {','.join(map(str, c.lattice_p))}")
    return EXIT_OK


def cmd_word(args, tol: Tolerances) -> int:
    g = _group_for(args.group, args.p, tol)
    m = g.eval(args.word)
    cls = classify_isometry(m, tol)
    order = projective_order(m, tol.max_order, tol)
    trace = complex(m.trace)
    if args.json:
        print(dumps({"word": args.word, "class": str(cls), "order": order, "trace": trace}), end="")
    else:
        print(f"class: {cls}")
        print(f"order: {order if order is not None else f'none (infinite or > {tol.max_order})'}")
        print(f"trace: {trace.real:.12g}{trace.imag:+.12g}i")
    return EXIT_OK


def _selected_cases(args) -> list[CaseId]:
    if args.case == "all":
        if args.p not in (None, "all"):
            raise CherbolicError("'verify all' takes no p")
        return all_cases()
    name = args.case.lower()
    if name not in CASES:
        raise _unknown_case(name)
    if args.p in (None, "all"):
        return [CaseId(name, p) for p in CASES[name].lattice_p]
    return [CaseId(name, _parse_p(args.p))]


def _unknown_case(name: str) -> CherbolicError:
    return NonCatalogParameter(f"unknown case {name!r} (cases: {', '.join(sorted(CASES))})")


def cmd_verify(args, tol: Tolerances) -> int:
    summary = Summary()
    try:
        cases = _selected_cases(args)
    except (CherbolicError, argparse.ArgumentTypeError) as exc:
        summary.reports.append(failure_report(args.case, args.p, exc))
        _emit_json(args.json, summary)
        raise
    for case in cases:
        summary.reports.append(case_report(case, tol))
    if args.json is None:
        for r in summary.reports:
            print(f"{'PASS' if r['pass'] else 'FAIL'}  {r['case']}:p{r['p']}{_failure_hint(r)}")
        print(f"{sum(r['pass'] for r in summary.reports)}/{len(summary.reports)} cases pass")
    else:
        _emit_json(args.json, summary)
    return EXIT_OK if summary.passed else EXIT_FAIL


def _failure_hint(r: dict) -> str:
    parts = []
    bad = [x["label"] for x in r["ambient_presentation"] if not x["pass"]]
    if bad:
        parts.append(f"ambient {bad}")
    if not r["poincare"]["pass"]:
        cyc = [",".join(c["members"]) for c in r["poincare"]["cycles"] if not c["pass"]]
        parts.append(f"poincare {cyc or r['poincare']['errors']}")
    sub = [x["label"] for x in r["subgroup_presentation"]["relators"] if not x["pass"]]
    if sub:
        parts.append(f"subgroup {sub}")
    ids = [x["lhs"] for x in r["identities"] if not x["pass"]]
    if ids:
        parts.append(f"identities {ids}")
    return ("  " + "; ".join(parts)) if parts else ""


def _emit_json(target, summary: Summary) -> None:
    if target is None:
        return
    text = summary.to_json()
    if target == "-":
        sys.stdout.write(text)
    else:
        _write(Path(target), text)


def _write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def cmd_polygon(args, tol: Tolerances) -> int:
    name = args.case.lower()
    if name not in CASES:
        raise _unknown_case(name)
    case = CaseId(name, args.p)
    doc = polygon_document(poincare_verify(case.group(tol), case, tol))
    if args.json:
        _write(Path(args.json), doc.to_json())
    if args.svg:
        from .figures import write_svg

        write_svg(doc, args.svg)
    if args.png:
        from .figures import write_png

        write_png(doc, args.png)
    if not (args.json or args.svg or args.png):
        sys.stdout.write(doc.to_json())
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-alg", type=float, help="relative tolerance for algebraic identities")
    common.add_argument("--tol-angle", type=float, help="absolute tolerance for angles and distances")
    common.add_argument("--tol-zero", type=float, help="zero threshold for sign decisions")
    common.add_argument("--max-order", type=int, help="largest finite order searched")

    parser = argparse.ArgumentParser(
        prog="cherbolic", description="Triangle groups in PU(2,1) and their C-Fuchsian subgroups."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", parents=[common], help="catalog families and lattice values of p")
    p.add_argument("--family", help=f"'{SPORADIC}', '{THOMPSON}' or a family name")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("word", parents=[common], help="classify a word in the generators")
    p.add_argument("group", help="family (tau1, S2, ...) or case name")
    p.add_argument("p", type=_parse_p)
    p.add_argument("word", help="e.g. \"1 J\", \"(1 3' 2 3)^2\"; empty for the identity")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("verify", parents=[common], help="run every check for a case")
    p.add_argument("case", help="case name or 'all'")
    p.add_argument("p", nargs="?", help="lattice value of p, or 'all' (default)")
    p.add_argument("--json", nargs="?", const="-", metavar="PATH", help="JSON report to PATH (stdout if omitted)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("polygon", parents=[common], help="polygon document and figures")
    p.add_argument("case")
    p.add_argument("p", type=_parse_p)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--png", metavar="PATH", help="matplotlib rendering")
    p.set_defaults(func=cmd_polygon)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerances(args)
        return args.func(args, tol)
    except (CherbolicError, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
