"""Theory files.

::

    # comments run to end of line
    sig
      const c, e
      fun f/1, g/2
      rel p/1
    end
    isdef f := not (v1 = c)
    axiom forall v1 (v1 = c \\/ f(v1) = c)

Functions without an ``isdef`` line are total.  Formulas may use surface
sugar; axioms are desugared against the finished isdef map, guards against a
map in which every function is total (a valid guard only uses total
functions, so nothing is lost).
"""

from __future__ import annotations

import re

from .core import Signature, TRUE
from .errors import ParseError, TernlogError
from .isdef import Theory
from .surface import parse_formula, print_formula
from .translate import desugar

_DECL_RE = re.compile(r"^([A-Za-z_*][A-Za-z0-9_]*)\s*/\s*([0-9]+)$")


def _lines(text: str):
    pos = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0].strip()
        yield pos + (len(raw) - len(raw.lstrip())), line
        pos += len(raw)


def parse_theory(text: str) -> Theory:
    consts: list[str] = []
    funcs: dict[str, int] = {}
    rels: dict[str, int] = {}
    guards: list[tuple[int, str, str]] = []
    axioms: list[tuple[int, str]] = []
    in_sig = seen_sig = False
    for pos, line in _lines(text):
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if in_sig:
            if line == "end":
                in_sig = False
            elif head == "const":
                consts += [c.strip() for c in rest.split(",") if c.strip()]
            elif head in ("fun", "rel"):
                for item in rest.split(","):
                    m = _DECL_RE.match(item.strip())
                    if not m:
                        raise ParseError(f"bad declaration {item.strip()!r}", pos, ("name/arity",), text)
                    (funcs if head == "fun" else rels)[m[1]] = int(m[2])
            else:
                raise ParseError(f"unexpected {head!r} in sig block", pos, ("const", "fun", "rel", "end"), text)
        elif line == "sig":
            if seen_sig:
                raise ParseError("duplicate sig block", pos, text=text)
            in_sig = seen_sig = True
        elif head == "isdef":
            name, sep, body = rest.partition(":=")
            if not sep:
                raise ParseError("expected 'isdef f := formula'", pos, (":=",), text)
            at = line.index(":=") + 2
            guards.append((pos + at + len(body) - len(body.lstrip()), name.strip(), body.strip()))
        elif head == "axiom":
            axioms.append((pos + (line.index(rest) if rest else len(line)), rest))
        else:
            raise ParseError(f"unexpected {head!r}", pos, ("sig", "isdef", "axiom"), text)
    if in_sig:
        raise ParseError("sig block is not closed by 'end'", len(text), ("end",), text)
    try:
        sig = Signature(frozenset(consts), funcs, rels)
    except TernlogError as exc:
        raise ParseError(str(exc), 0, text=text) from None
    provisional = Theory(sig)
    isdef_map = {}
    for pos, name, body in guards:
        if name not in sig.functions:
            raise ParseError(f"isdef for undeclared function {name!r}", pos, text=text)
        isdef_map[name] = desugar(provisional, _formula(body, sig, text, pos))
    th = Theory(sig, (), isdef_map)
    return th.with_axioms(desugar(th, _formula(body, sig, text, pos)) for pos, body in axioms)


def _formula(body: str, sig: Signature, text: str, pos: int):
    try:
        return parse_formula(body, sig)
    except ParseError as exc:
        raise type(exc)(exc.message, pos + exc.pos, exc.expected, text) from None


def format_theory(th: Theory) -> str:
    lines = ["sig"]
    if th.sig.constants:
        lines.append("  const " + ", ".join(sorted(th.sig.constants)))
    if th.sig.functions:
        lines.append("  fun " + ", ".join(f"{f}/{a}" for f, a in sorted(th.sig.functions.items())))
    if th.sig.relations:
        lines.append("  rel " + ", ".join(f"{r}/{a}" for r, a in sorted(th.sig.relations.items())))
    lines.append("end")
    for f, g in th.isdef_map.items():
        if g != TRUE:
            lines.append(f"isdef {f} := {print_formula(g)}")
    for a in th.axioms:
        lines.append(f"axiom {print_formula(a)}")
    return "\n".join(lines) + "\n"
