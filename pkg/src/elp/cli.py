"""Command-line front end.

Exit status is 0 on success (including programs without world-views), 1 on
usage, parse and unsupported-feature errors, 2 when a search bound is hit.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence, TextIO

from .asp import format_view, literal
from .eht import Mode, eht_valid, translate
from .errors import BoundExceeded, ElpError
from .properties import (
    ALL_SEMANTICS,
    Bounds,
    Property,
    check_scm,
    check_supra_asp,
    check_supra_s5,
    compare,
    solve,
)
from .reduct import Semantics, modal_reduct, reduct_for, world_views_reduct
from .syntax import parse_formula, parse_program, parse_rule, render_formula, render_program

EXIT_OK, EXIT_USAGE, EXIT_BOUND = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _semantics(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        if part == "all":
            out.extend(ALL_SEMANTICS)
        else:
            try:
                out.append(Semantics(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"unknown semantics '{part}'") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semantics", type=_semantics, action="append",
                        help="es15, es16, es18, es20, es21 or all; repeat or comma-separate")
    common.add_argument("--max-atoms", type=_positive, default=12)
    common.add_argument("--max-models", type=_positive, default=16,
                        help="bound on candidate worlds for classical models")
    common.add_argument("--max-periphery", type=_nonnegative, default=None)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = _Parser(prog="elp", description="Ground epistemic logic program workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text, source="FILE"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if source == "FILE":
            p.add_argument("file", nargs="?", default="-",
                           help="program file; '-' or omitted reads stdin")
        return p

    p = command("solve", "world-views under the selected semantics")
    p.add_argument("--diagnostics", action="store_true", help="include solver traces")
    p.add_argument("--functional-minimality", action="store_true",
                   help="experimental: functional truth-minimality for ES21")
    command("compare", "tabulate world-views across semantics")
    p = command("reduct", "show the modal reduct for a view, or for every guess")
    p.add_argument("--variant", choices=("es18", "es16"), default="es18")
    p.add_argument("--view", help='belief view such as "{{a},{b}}", or one valuation "{a,c}"')
    command("translate", "print the EHT translation")
    p = command("check", "check a property on a program")
    p.add_argument("--property", choices=[x.value for x in Property], required=True)
    p.add_argument("--constraint", help="subjective constraint for scm, e.g. ':- not K a.'")
    p = command("validate", "bounded EHT validity check", source=None)
    p.add_argument("formula", help="formula such as \"---p <-> -p\"")
    p.add_argument("--variant", choices=[m.value for m in Mode], default="functional")
    p.add_argument("--max-cluster", type=_positive, default=3)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


_VALUATION = re.compile(r"\{([^{}]*)\}")


def parse_view(text: str) -> frozenset:
    """Parse ``{{a},{b,~c}}``; a lone ``{a,c}`` is a single-valuation view."""
    text = text.strip()
    inner = text[1:-1].strip() if text.startswith("{") and text.endswith("}") else None
    if inner is None:
        raise ValueError(f"malformed view '{text}'")
    groups = _VALUATION.findall(inner) if "{" in inner else [inner]
    if not groups:
        raise ValueError(f"malformed view '{text}'")
    return frozenset(
        frozenset(literal(x) for x in g.split(",") if x.strip()) for g in groups
    )


def views_json(views) -> list:
    """Canonical form: sorted views of sorted valuations of sorted literals."""
    return sorted(sorted(sorted(str(l) for l in v) for v in view) for view in views)


def _selected(args) -> list:
    chosen = [s for group in (args.semantics or [ALL_SEMANTICS]) for s in group]
    out = []
    for s in chosen:
        if s not in out:
            out.append(s)
    return sorted(out, key=ALL_SEMANTICS.index)


def _bounds(args) -> Bounds:
    periphery = 2 if args.max_periphery is None else args.max_periphery
    return Bounds(args.max_atoms, args.max_models, periphery)


def _emit(out: TextIO, args, text: str, payload: dict):
    if args.format == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        out.write(text + "\n")


def _views_text(views) -> str:
    return ", ".join(sorted(format_view(v) for v in views)) if views else "no world-views"


def _cmd_solve(args, out):
    prog = parse_program(_read(args.file))
    bounds = _bounds(args)
    results, lines = [], []
    for s in _selected(args):
        res = solve(prog, s, bounds, functional_minimality=args.functional_minimality)
        diags = list(res.diagnostics) if args.diagnostics else []
        results.append({"semantics": str(s), "views": views_json(res.views),
                        "diagnostics": diags})
        lines.append(f"{s}: {_views_text(res.views)}")
        lines.extend(f"  {d}" for d in diags)
    _emit(out, args, "\n".join(lines), {"program": str(prog), "results": results})


def _cmd_compare(args, out):
    prog = parse_program(_read(args.file))
    report = compare(prog, _selected(args), _bounds(args))
    results = [{"semantics": str(s), "views": views_json(v), "diagnostics": []}
               for s, v in report.per_semantics.items()]
    _emit(out, args, report.table(),
          {"program": str(prog), "results": results, "notes": report.notes})


def _cmd_reduct(args, out):
    prog = parse_program(_read(args.file))
    variant = Semantics(args.variant)
    if args.view is not None:
        red = modal_reduct(prog, parse_view(args.view), variant)
        text = render_program(red)
        payload = {"program": str(prog), "view": views_json([parse_view(args.view)])[0],
                   "reduct": text}
        _emit(out, args, text, payload)
        return
    res = world_views_reduct(prog, variant, max_atoms=args.max_atoms)
    blocks, entries = [], []
    for t in res.diagnostics:
        red = render_program(reduct_for(prog, t.guess, variant))
        blocks.append(f"% {t.describe()}\n{red}")
        entries.append({"guess": sorted(map(str, t.guess)), "reduct": red,
                        "answer_sets": views_json([t.answer_sets])[0] if t.answer_sets else [],
                        "fixed_point": t.fixed_point})
    _emit(out, args, "\n\n".join(blocks), {"program": str(prog), "candidates": entries})


def _cmd_translate(args, out):
    prog = parse_program(_read(args.file))
    text = render_formula(translate(prog))
    _emit(out, args, text, {"program": str(prog), "formula": text})


def _cmd_check(args, out):
    prog = parse_program(_read(args.file))
    prop = Property(args.property)
    bounds = _bounds(args)
    results, lines = [], []
    for s in _selected(args):
        if prop is Property.SCM:
            if not args.constraint:
                raise ValueError("--constraint is required for scm")
            verdict = check_scm(prog, parse_rule(args.constraint), s, bounds)
        elif prop is Property.SUPRA_ASP:
            verdict = check_supra_asp(prog, s, bounds)
        else:
            verdict = check_supra_s5(prog, s, bounds)
        witness = verdict.witness
        results.append({"semantics": str(s), "holds": verdict.holds,
                        "views": views_json(witness.views) if witness else [],
                        "diagnostics": []})
        lines.append(str(verdict))
    _emit(out, args, "\n".join(lines),
          {"program": str(prog), "property": prop.value, "results": results})


def _cmd_validate(args, out):
    f = parse_formula(args.formula)
    mode = Mode(args.variant)
    periphery = args.max_periphery if args.max_periphery is not None else (
        0 if mode is Mode.FUNCTIONAL else 1)
    res = eht_valid(f, mode, args.max_atoms, args.max_cluster, periphery)
    payload = {"formula": render_formula(f), "variant": mode.value, "valid": res.valid,
               "models_checked": res.models_checked,
               "countermodel": None if res.valid else str(res.countermodel)}
    _emit(out, args, res.describe(), payload)


_COMMANDS = {
    "solve": _cmd_solve,
    "compare": _cmd_compare,
    "reduct": _cmd_reduct,
    "translate": _cmd_translate,
    "check": _cmd_check,
    "validate": _cmd_validate,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args, out)
    except BoundExceeded as exc:
        print(f"elp: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (ElpError, ValueError, OSError) as exc:
        print(f"elp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
