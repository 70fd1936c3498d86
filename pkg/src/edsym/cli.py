"""Command line driver.

Each subcommand builds a request model, calls the matching handler from
:mod:`edsym.service` in process, and renders the response as plain text
or as the canonical JSON report.  Exit codes: 0 when every requested
check passed, 1 when a verification came back negative, 2 for usage and
parse errors, 3 when a resource limit was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError

from .errors import DomainError, LimitError
from .grammar import ParseError, SourceSpan, SYNTACTIC
from .service import (BlocksRequest, BracketRequest, HierarchyRequest,
                      SourceModel, TransformRequest, VerifyRequest,
                      blocks_handler, bracket_handler, catalog_entry_handler,
                      catalog_list_handler, hierarchy_handler,
                      transform_handler, verify_handler)

_EQ_CHOICES = ["elliptic", "hyperbolic", "intermediate"]


def _finish(args, doc: dict, text_lines: list[str], ok: bool) -> int:
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")
    return 0 if ok else 1


def _load_doc(path: str) -> dict:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(raw)
    except ValueError as exc:
        raise ParseError(SYNTACTIC, f"invalid JSON in {path}: {exc}",
                         SourceSpan(0, 0, 1, 1)) from None
    if not isinstance(doc, dict):
        raise ParseError(SYNTACTIC, f"expected a JSON object in {path}",
                         SourceSpan(0, 0, 1, 1))
    return doc


# ----------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    sources = [SourceModel(text=t) for t in args.expr or []]
    sources += [SourceModel(name=n) for n in args.name or []]
    sources += [SourceModel(doc=_load_doc(p)) for p in args.file or []]
    if not sources:
        raise DomainError("verify needs at least one of --expr, --name, --file")
    resp = verify_handler(VerifyRequest(
        equation=args.eq, candidates=sources, parallel=args.parallel,
        max_order=args.max_order, max_degree=args.max_degree))
    lines = [f"equation: {resp.equation}"]
    for check in resp.checks:
        if check.symmetry:
            lines.append(f"{check.label}: symmetry (residual 0)")
        else:
            lines.append(f"{check.label}: NOT a symmetry")
            lines.append(f"  residual: {check.residual.text}")
    lines.append(f"result: {'PASS' if resp.ok else 'FAIL'}")
    return _finish(args, resp.model_dump(), lines, resp.ok)


def cmd_transform(args) -> int:
    flags = [("theta", args.theta), ("theta_prime", args.theta_prime),
             ("psi", args.psi), ("psi_prime", args.psi_prime),
             ("pullback", args.pullback), ("pushforward", args.pushforward)]
    mode = next(name for name, on in flags if on)
    if args.expr is not None:
        source = SourceModel(text=args.expr)
    elif args.name is not None:
        source = SourceModel(name=args.name)
    else:
        source = SourceModel(doc=_load_doc(args.file))
    resp = transform_handler(TransformRequest(
        mode=mode, source=source, literal=args.literal,
        max_order=args.max_order, max_degree=args.max_degree))
    lines = [f"mode: {resp.mode}",
             f"input ({resp.input.chart}): {resp.input.text}",
             f"result ({resp.result.chart}): {resp.result.text}"]
    return _finish(args, resp.model_dump(), lines, True)


def cmd_blocks(args) -> int:
    resp = blocks_handler(BlocksRequest(
        k=args.k, map=args.map,
        max_order=args.max_order, max_degree=args.max_degree))
    lines = [f"map: {resp.map}", f"k: {resp.k}", "P:"]
    lines += ["  [" + ", ".join(row) + "]" for row in resp.p]
    lines.append("Q:")
    lines += ["  [" + ", ".join(row) + "]" for row in resp.q]
    lines.append("checks:")
    lines += [f"  {name}: {'pass' if good else 'FAIL'}"
              for name, good in resp.checks.items()]
    lines.append(f"result: {'PASS' if resp.ok else 'FAIL'}")
    return _finish(args, resp.model_dump(), lines, resp.ok)


def cmd_hierarchy(args) -> int:
    resp = hierarchy_handler(HierarchyRequest(
        m=args.m, max_j=args.max_j, relations=args.relations,
        max_order=args.max_order, max_degree=args.max_degree))
    lines = [f"m: {resp.m}"]
    for row in resp.rows:
        state = "vanishes" if row.vanishes else "nonzero"
        tag = "as expected" if row.ok else "UNEXPECTED"
        lines.append(f"j={row.j}: {state} ({tag})")
        lines.append(f"  generator: {row.generator.text}")
    if resp.relations is not None:
        lines.append("relations:")
        for rec in resp.relations:
            measured = "-" if rec.measured is None else rec.measured
            lines.append(
                f"  {rec.family:<5} j={rec.j}: expected {rec.expected}, "
                f"measured {measured}, {'pass' if rec.holds else 'FAIL'}")
    lines.append(f"result: {'PASS' if resp.ok else 'FAIL'}")
    return _finish(args, resp.model_dump(), lines, resp.ok)


def cmd_bracket(args) -> int:
    resp = bracket_handler(BracketRequest(
        equation=args.eq, a=SourceModel(text=args.a),
        b=SourceModel(text=args.b),
        max_order=args.max_order, max_degree=args.max_degree))
    lines = [f"equation: {resp.equation}",
             f"bracket: {resp.bracket.text}",
             f"symmetry: {'yes' if resp.symmetry else 'no'}"]
    if not resp.symmetry:
        lines.append(f"  residual: {resp.residual.text}")
    lines.append(f"result: {'PASS' if resp.ok else 'FAIL'}")
    return _finish(args, resp.model_dump(), lines, resp.ok)


def cmd_catalog(args) -> int:
    if args.name is not None:
        resp = catalog_entry_handler(args.name, args.params)
        lines = [f"{resp.name} ({resp.entry.kind}, {resp.entry.chart}):",
                 f"  {resp.entry.text}"]
        return _finish(args, resp.model_dump(), lines, True)
    if args.params is not None:
        raise DomainError("--params needs --name classical")
    resp = catalog_list_handler()
    width = max(len(e.name) for e in resp.entries)
    lines = [f"{e.name:<{width}}  {e.kind:<6}  {e.chart}"
             for e in resp.entries]
    return _finish(args, resp.model_dump(), lines, True)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit the canonical JSON report on stdout")
    common.add_argument("--max-order", type=int, default=None, metavar="N",
                        help="jet order bound (default 16)")
    common.add_argument("--max-degree", type=int, default=None, metavar="N",
                        help="coefficient degree bound (default 256)")

    parser = argparse.ArgumentParser(
        prog="edsym",
        description="Exact symmetry calculus for the Euler-Darboux "
                    "equations over Gaussian rationals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="check candidate generating sections")
    p.add_argument("--eq", required=True, choices=_EQ_CHOICES)
    p.add_argument("--expr", action="append", metavar="TEXT",
                   help="candidate in grammar text (repeatable)")
    p.add_argument("--name", action="append", metavar="ID",
                   help="catalog entry (repeatable)")
    p.add_argument("--file", action="append", metavar="PATH",
                   help="JSON document file (repeatable)")
    p.add_argument("--parallel", action="store_true",
                   help="verify candidates concurrently; output order fixed")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transform", parents=[common],
                       help="map sections and operators between the sides")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--theta", action="store_true",
                      help="hyperbolic section to elliptic section")
    mode.add_argument("--theta-prime", action="store_true",
                      help="elliptic section to hyperbolic section")
    mode.add_argument("--psi", action="store_true",
                      help="hyperbolic operator to elliptic operator")
    mode.add_argument("--psi-prime", action="store_true",
                      help="elliptic operator to hyperbolic operator")
    mode.add_argument("--pullback", action="store_true",
                      help="raw pullback along the complex base change")
    mode.add_argument("--pushforward", action="store_true",
                      help="raw pushforward along the complex base change")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", metavar="TEXT",
                     help="input in grammar text (operator text for psi modes)")
    src.add_argument("--name", metavar="ID", help="catalog entry")
    src.add_argument("--file", metavar="PATH", help="JSON document file")
    p.add_argument("--literal", action="store_true",
                   help="use the unrescaled base change (pullback and "
                        "pushforward only)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("blocks", parents=[common],
                       help="derivative-transport blocks and their checks")
    p.add_argument("--k", type=int, required=True, metavar="N",
                   help="jet order of the block")
    p.add_argument("--map", choices=["canonical", "ed"], default="canonical")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("hierarchy", parents=[common],
                       help="nested-commutator operators and generators")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-j", type=int, default=None, dest="max_j",
                   help="largest j to tabulate (default 2m+1)")
    p.add_argument("--relations", action="store_true",
                   help="also verify the commutator relation table")
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("bracket", parents=[common],
                       help="Jacobi bracket of two sections plus verdict")
    p.add_argument("--eq", required=True, choices=_EQ_CHOICES)
    p.add_argument("--a", required=True, metavar="TEXT")
    p.add_argument("--b", required=True, metavar="TEXT")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("catalog", parents=[common],
                       help="built-in sections and operators")
    p.add_argument("--list", action="store_true",
                   help="list all entries (default)")
    p.add_argument("--name", metavar="ID", help="show one entry")
    p.add_argument("--params", nargs=4, metavar="C",
                   help="rational parameters for --name classical")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("serve", parents=[common],
                       help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def _emit_error(args, kind: str, exc: Exception) -> None:
    if getattr(args, "json", False):
        err = {"kind": kind, "message": str(exc)}
        span = getattr(exc, "span", None)
        if span is not None:
            err["span"] = {"start": span.start, "end": span.end,
                           "line": span.line, "col": span.col}
        sys.stdout.write(json.dumps({"error": err}, indent=2) + "\n")
    else:
        sys.stderr.write(f"edsym: {exc}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except ParseError as exc:
        _emit_error(args, exc.kind, exc)
        return 2
    except LimitError as exc:
        _emit_error(args, "limit", exc)
        return 3
    except (DomainError, ValidationError) as exc:
        _emit_error(args, "domain", exc)
        return 2


run = main


if __name__ == "__main__":
    raise SystemExit(main())
