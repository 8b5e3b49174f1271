"""Command-line front end.

Exit codes: 0 success or valid, 1 refuted or invalid, 2 inconclusive,
3 usage or parse error.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .core import Formula
from .errors import BoundExceeded, KernelError, ParseError, TernlogError
from .formats import format_theory, parse_theory
from .isdef import (
    Theory, isdef_chain, isdef_formula, isdef_term, simplify, validate_isdef_map,
)
from .kernel import expand, format_script, load_script, replay
from .regularity import (
    KLEENE_AND, KLEENE_IFF, KLEENE_IMP, KLEENE_NOT, KLEENE_OR, LUKASIEWICZ_IMP, STAR,
    TruthTable, check_regular_formula, check_regular_truth_table,
)
from .semantics import (
    Assignment, CounterModel, TruthValue, enumerate_structures, eval_formula, find_countermodel,
    format_structure, parse_structure,
)
from .surface import (
    EBang, GuardedImp, GuardedImp2, LehmannExists, LukImp, Star, parse_formula, parse_term,
    print_formula,
)
from .translate import desugar

OK, REFUTED, INCONCLUSIVE, USAGE = 0, 1, 2, 3

TABLES = {
    "not": KLEENE_NOT, "and": KLEENE_AND, "or": KLEENE_OR, "imp": KLEENE_IMP,
    "iff": KLEENE_IFF, "luk-imp": LUKASIEWICZ_IMP, "star": STAR,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Out:
    """Collects the report; prints text lines or one JSON object at the end."""

    def __init__(self, stream: TextIO, as_json: bool):
        self.stream = stream
        self.as_json = as_json
        self.data: dict = {}

    def line(self, text: str) -> None:
        if not self.as_json:
            self.stream.write(text if text.endswith("\n") else text + "\n")

    def put(self, **fields) -> None:
        self.data.update(fields)

    def close(self, code: int) -> int:
        if self.as_json:
            self.stream.write(json.dumps({**self.data, "exit": code}, sort_keys=True) + "\n")
        return code


# -- helpers -----------------------------------------------------------------

def _read(path: str) -> str:
    return Path(path).read_text()


def _theory(path: str | None) -> Theory:
    if path is None:
        raise UsageError("this command needs --theory")
    return parse_theory(_read(path))


def _formula(th: Theory, text: str) -> Formula:
    return desugar(th, parse_formula(text, th.sig))


def _assignment(text: str | None) -> Assignment:
    if not text:
        return Assignment()
    values = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or not name.startswith("v") or not name[1:].isdigit():
            raise UsageError(f"bad assignment entry {part.strip()!r} (expected vN=k)")
        values[int(name[1:])] = int(value)
    return Assignment(values)


# -- commands ----------------------------------------------------------------

def cmd_fmt(args, out: _Out) -> int:
    if args.file:
        path = Path(args.file)
        text = path.read_text()
        if path.suffix == ".3th":
            result = format_theory(parse_theory(text))
        elif path.suffix == ".3st":
            th = _theory(args.theory) if args.theory else None
            result = format_structure(parse_structure(text, th.sig if th else None))
        elif path.suffix == ".3pf":
            script = load_script(path, _theory(args.theory) if args.theory else None)
            result = format_script(script.theory, script.derivation, script.theory_path,
                                   claims=False)
        else:
            raise UsageError(f"unknown file type {path.suffix!r} (use .3th, .3st or .3pf)")
        out.line(result.rstrip("\n"))
        out.put(text=result)
        return OK
    if args.formula is None:
        raise UsageError("fmt needs a file or --formula")
    th = _theory(args.theory)
    shown = print_formula(parse_formula(args.formula, th.sig))
    out.line(shown)
    out.put(formula=shown)
    return OK


def cmd_validate(args, out: _Out) -> int:
    th = parse_theory(_read(args.theory_file))
    report = validate_isdef_map(th)
    for v in report.violations:
        out.line(str(v))
    out.put(valid=report.ok, violations=[str(v) for v in report.violations])
    if report.ok:
        out.line(f"valid: {len(th.sig.functions)} functions, {len(th.axioms)} axioms")
        return OK
    return REFUTED


def cmd_isdef(args, out: _Out) -> int:
    th = _theory(args.theory)
    try:
        if args.term:
            raise ParseError("term requested", 0)
        expr = _formula(th, args.expr)
        result = isdef_formula(th, expr)
    except ParseError:
        if not args.term and _looks_like_formula(th, args.expr):
            raise
        expr = parse_term(args.expr, th.sig)
        result = isdef_term(th, expr)
    if args.steps:
        chain = [print_formula(stage) for stage in isdef_chain(th, expr)]
        for k, line in enumerate(chain):
            out.line(("  = " if k else "  ") + line)
        out.put(steps=chain, isdef=chain[-1])
        return OK
    if args.simplify:
        result = simplify(result)
    shown = print_formula(result)
    out.line(shown)
    out.put(isdef=shown)
    return OK


def _looks_like_formula(th: Theory, text: str) -> bool:
    try:
        parse_term(text, th.sig)
    except ParseError:
        return True
    return False


def cmd_eval(args, out: _Out) -> int:
    th = _theory(args.theory) if args.theory else None
    sigma = parse_structure(_read(args.structure), th.sig if th else None)
    if th is None:
        th = Theory(sigma.signature())
        sugared = parse_formula(args.formula, th.sig)
        if _needs_guards(sugared):
            raise UsageError("this formula refers to definedness; pass --theory")
        phi = desugar(th, sugared)
    else:
        phi = _formula(th, args.formula)
    value = eval_formula(sigma, _assignment(args.assign), phi)
    out.line(value.name)
    out.put(value=value.name)
    return OK


_GUARDED_SUGAR = (Star, EBang, LukImp, GuardedImp, GuardedImp2, LehmannExists)


def _needs_guards(node) -> bool:
    if isinstance(node, _GUARDED_SUGAR):
        return True
    if dataclasses.is_dataclass(node):
        return any(_needs_guards(getattr(node, f.name)) for f in dataclasses.fields(node))
    if isinstance(node, tuple):
        return any(_needs_guards(x) for x in node)
    return False


def cmd_check(args, out: _Out) -> int:
    script = load_script(args.script, _theory(args.theory) if args.theory else None)
    d = expand(script.theory, script.derivation) if args.expand else script.derivation
    try:
        result = replay(script.theory, d)
    except KernelError as exc:
        out.line(f"FAILED: {exc}")
        out.put(ok=False, error=str(exc), step=getattr(exc, "index", None))
        return REFUTED
    out.line(f"OK: {result.final}")
    for h in result.hypotheses:
        out.line(f"  assuming {h}")
    out.put(ok=True, judgment=str(result.final), steps=len(d.steps),
            hypotheses=[str(h) for h in result.hypotheses])
    return OK


def cmd_consequence(args, out: _Out) -> int:
    th = parse_theory(_read(args.theory_file))
    context = [_formula(th, part) for part in (args.context or "").split(";") if part.strip()]
    th = th.with_axioms((*th.axioms, *context))
    phi = _formula(th, args.formula)
    try:
        result = find_countermodel(th, phi, args.max_n, args.budget, args.jobs)
    except BoundExceeded as exc:
        out.line(f"INCONCLUSIVE: {exc}")
        out.put(result="inconclusive", detail=str(exc))
        return INCONCLUSIVE
    if isinstance(result, CounterModel):
        text = format_structure(result.structure)
        nu = str(result.assignment) or "(no free variables)"
        out.line(text.rstrip("\n"))
        out.line(f"# assignment: {nu}")
        out.put(result="countermodel", structure=text,
                assignment={f"v{i}": d for i, d in sorted(result.assignment.values.items())})
        return REFUTED
    out.line(f"NONE-UP-TO({result.max_n})")
    out.put(result="none-up-to", max_n=result.max_n, checked=result.checked)
    return INCONCLUSIVE


def cmd_regular(args, out: _Out) -> int:
    if args.table or args.values:
        tt = TABLES[args.table] if args.table else _table_from_values(args.values)
        report = check_regular_truth_table(tt)
        checked = report.checked
    else:
        if args.formula is None:
            raise UsageError("regular needs --table, --values or a formula")
        th = _theory(args.theory)
        phi = _formula(th, args.formula)
        if args.structure:
            structures = [parse_structure(_read(args.structure), th.sig)]
        else:
            structures = (s for n in range(1, args.max_n + 1)
                          for s in enumerate_structures(th.sig, n))
        report, checked = None, 0
        for sigma in structures:
            report = check_regular_formula(sigma, phi)
            checked += report.checked
            if not report:
                out.line(format_structure(sigma).rstrip("\n"))
                break
    out.line(str(report) if not report else f"regular ({checked} contexts checked)")
    out.put(regular=bool(report), position=report.position,
            args=[str(a) for a in report.args] if report.args else None, checked=checked)
    return OK if report else REFUTED


def _table_from_values(values: str) -> TruthTable:
    letters = values.replace(" ", "")
    arity = {3: 1, 9: 2, 27: 3}.get(len(letters))
    if arity is None or set(letters) - set("FUT"):
        raise UsageError("--values needs 3, 9 or 27 letters from F, U, T")
    keys = itertools.product(TruthValue, repeat=arity)
    return TruthTable(arity, {k: TruthValue("FUT".index(ch)) for k, ch in zip(keys, letters)})


def cmd_translate(args, out: _Out) -> int:
    th = _theory(args.theory)
    shown = print_formula(_formula(th, args.formula))
    out.line(shown)
    out.put(formula=shown)
    return OK


# -- entry points ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ternlog", description="Three-valued first-order logic with partial functions.")
    p.add_argument("--json", action="store_true", help="print one JSON object")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("fmt", help="parse and print a formula or a file")
    s.add_argument("file", nargs="?", help=".3th, .3st or .3pf file")
    s.add_argument("--formula")
    s.add_argument("--theory")
    s.set_defaults(run=cmd_fmt)

    s = sub.add_parser("validate", help="check a theory file and its isdef map")
    s.add_argument("theory_file")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("isdef", help="print the isdef formula of a term or formula")
    s.add_argument("expr")
    s.add_argument("--theory", required=True)
    s.add_argument("--term", action="store_true", help="read EXPR as a term")
    s.add_argument("--simplify", action="store_true", help="drop T conjuncts for display")
    s.add_argument("--steps", action="store_true", help="show the unfolding level by level")
    s.set_defaults(run=cmd_isdef)

    s = sub.add_parser("eval", help="evaluate a formula in a structure")
    s.add_argument("structure")
    s.add_argument("formula")
    s.add_argument("--theory")
    s.add_argument("--assign", help="comma-separated vN=k")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("check", help="check a proof script")
    s.add_argument("script")
    s.add_argument("--theory")
    s.add_argument("--expand", action="store_true", help="inline lemma steps first")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("consequence", help="search a bounded countermodel")
    s.add_argument("theory_file")
    s.add_argument("formula")
    s.add_argument("--context", help="extra hypotheses separated by ';'")
    s.add_argument("--max-n", type=int, default=3)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(run=cmd_consequence)

    s = sub.add_parser("regular", help="check regularity of a truth table or formula")
    s.add_argument("formula", nargs="?")
    s.add_argument("--table", choices=sorted(TABLES))
    s.add_argument("--values", help="table entries in F<U<T argument order, e.g. TTTUUTFUT")
    s.add_argument("--theory")
    s.add_argument("--structure")
    s.add_argument("--max-n", type=int, default=2)
    s.set_defaults(run=cmd_regular)

    s = sub.add_parser("translate", help="lower surface operators to core formulas")
    s.add_argument("formula")
    s.add_argument("--theory", required=True)
    s.set_defaults(run=cmd_translate)
    return p


def run_cli(argv: Sequence[str], stdout: TextIO | None = None,
            stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return USAGE
    except SystemExit as exc:  # --help
        return OK if exc.code in (0, None) else USAGE
    out = _Out(stdout, args.json)
    try:
        return out.close(args.run(args, out))
    except ParseError as exc:
        stderr.write(exc.caret() + "\n")
        out.put(error=str(exc), position=exc.pos)
    except (UsageError, OSError, TernlogError) as exc:
        stderr.write(f"error: {exc}\n")
        out.put(error=str(exc))
    return out.close(USAGE)


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
